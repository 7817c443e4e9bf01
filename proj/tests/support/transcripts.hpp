#pragma once

// Reference redis-cli sessions (set intersection, type clash, list length, hash),
// recast as single-value wire commands. Multi-member SADD and HMSET lines
// become consecutive single adds; their integer replies sum to the
// original reply.

#include <string>
#include <vector>

#include "edis/store.hpp"

namespace transcripts {

struct Step {
  edis::WireCommand cmd;
  edis::Reply expect;
};

struct Transcript {
  std::string name;
  std::vector<Step> steps;
};

inline const std::string kWrongTypePrefix = "WRONGTYPE Operation against a key";

inline std::vector<Transcript> all() {
  using edis::Reply;
  return {
      {"set intersection",
       {{{"SADD", "some-set", "a"}, Reply::integer_reply(1)},
        {{"SADD", "some-set", "b"}, Reply::integer_reply(1)},
        {{"SADD", "some-set", "c"}, Reply::integer_reply(1)},
        {{"SADD", "another-set", "a"}, Reply::integer_reply(1)},
        {{"SADD", "another-set", "b"}, Reply::integer_reply(1)},
        {{"SINTER", "some-set", "another-set"},
         Reply::array({Reply::bulk("a"), Reply::bulk("b")})}}},
      {"string then sadd",
       {{{"SET", "some-string", "foo"}, Reply::status("OK")},
        {{"SADD", "some-string", "bar"},
         Reply::error("WRONGTYPE Operation against a key holding the wrong kind of value")}}},
      {"list length",
       {{{"LPUSH", "some-list", "bar"}, Reply::integer_reply(1)},
        {{"LLEN", "some-list"}, Reply::integer_reply(1)},
        {{"SET", "some-string", "foo"}, Reply::status("OK")},
        {{"LLEN", "some-string"},
         Reply::error("WRONGTYPE Operation against a key holding the wrong kind of value")},
        {{"LLEN", "nonexistent"}, Reply::integer_reply(0)}}},
      {"hash",
       {{{"HSET", "user", "name", "banacorn"}, Reply::integer_reply(1)},
        {{"HSET", "user", "birthyear", "1992"}, Reply::integer_reply(1)},
        {{"HSET", "user", "verified", "1"}, Reply::integer_reply(1)},
        {{"HGET", "user", "name"}, Reply::bulk("banacorn")},
        {{"HGET", "user", "birthyear"}, Reply::bulk("1992")}}},
  };
}

/// Replays one transcript on a fresh store; returns the index of the first
/// step whose reply differs, or -1.
inline int replay(const Transcript& t, std::vector<edis::Reply>* got = nullptr) {
  edis::Store s;
  for (std::size_t i = 0; i < t.steps.size(); ++i) {
    edis::Reply r = s.exec(t.steps[i].cmd);
    if (got) got->push_back(r);
    if (!(r == t.steps[i].expect)) return static_cast<int>(i);
  }
  return -1;
}

}  // namespace transcripts
