#include "edis/typedict.hpp"

#include <algorithm>

namespace edis {
namespace {

auto find_key(TypeDict& xs, std::string_view k) {
  return std::find_if(xs.begin(), xs.end(),
                      [k](const DictEntry& e) { return e.key == k; });
}

auto find_key(const TypeDict& xs, std::string_view k) {
  return std::find_if(xs.begin(), xs.end(),
                      [k](const DictEntry& e) { return e.key == k; });
}

// The hash clauses only match an entry whose key is k *and* whose tag is a
// HashOf; any other entry, including one for k holding a non-hash tag, falls
// through to the recursive clause.
auto find_hash(TypeDict& xs, std::string_view k) {
  return std::find_if(xs.begin(), xs.end(), [k](const DictEntry& e) {
    return e.key == k && e.tag.kind == TypeTag::Kind::Hash;
  });
}

auto find_hash(const TypeDict& xs, std::string_view k) {
  return std::find_if(xs.begin(), xs.end(), [k](const DictEntry& e) {
    return e.key == k && e.tag.kind == TypeTag::Kind::Hash;
  });
}

}  // namespace

Lookup dict_get(const TypeDict& xs, std::string_view k) {
  auto it = find_key(xs, k);
  if (it == xs.end()) return std::nullopt;
  return it->tag;
}

TypeDict dict_set(TypeDict xs, std::string_view k, TypeTag x) {
  if (auto it = find_key(xs, k); it != xs.end())
    it->tag = std::move(x);
  else
    xs.push_back({std::string(k), std::move(x)});
  return xs;
}

TypeDict dict_del(TypeDict xs, std::string_view k) {
  if (auto it = find_key(xs, k); it != xs.end()) xs.erase(it);
  return xs;
}

bool dict_member(const TypeDict& xs, std::string_view k) {
  return find_key(xs, k) != xs.end();
}

Lookup hash_get(const TypeDict& xs, std::string_view k, std::string_view f) {
  auto it = find_hash(xs, k);
  if (it == xs.end()) return std::nullopt;
  return dict_get(it->tag.fields, f);
}

TypeDict hash_set(TypeDict xs, std::string_view k, std::string_view f, TypeTag a) {
  if (auto it = find_hash(xs, k); it != xs.end()) {
    it->tag.fields = dict_set(std::move(it->tag.fields), f, std::move(a));
  } else {
    xs.push_back({std::string(k), TypeTag::hash_of(dict_set({}, f, std::move(a)))});
  }
  return xs;
}

TypeDict hash_del(TypeDict xs, std::string_view k, std::string_view f) {
  if (auto it = find_hash(xs, k); it != xs.end())
    it->tag.fields = dict_del(std::move(it->tag.fields), f);
  return xs;
}

bool hash_member(const TypeDict& xs, std::string_view k, std::string_view f) {
  // Unlike the other hash functions, MemHash has an explicit 'False clause
  // for a non-hash entry under k, so the search stops at the first k.
  auto it = find_key(xs, k);
  if (it == xs.end() || it->tag.kind != TypeTag::Kind::Hash) return false;
  return dict_member(it->tag.fields, f);
}

bool is_string(const TypeTag& t) { return t.kind == TypeTag::Kind::String; }
bool is_list(const TypeTag& t) { return t.kind == TypeTag::Kind::List; }
bool is_set(const TypeTag& t) { return t.kind == TypeTag::Kind::Set; }
bool is_hash(const TypeTag& t) { return t.kind == TypeTag::Kind::Hash; }

bool or_nx(TagPredicate pred, const TypeDict& xs, std::string_view k) {
  auto found = dict_get(xs, k);
  if (!found) return true;
  return pred(*found);
}

}  // namespace edis
