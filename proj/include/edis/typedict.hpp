#pragma once

// Term-level counterparts of the type-level dictionary functions. Each
// function follows its defining clauses in order, so dictionaries with
// duplicate keys behave exactly as the clause-by-clause reduction would.

#include <optional>
#include <string_view>

#include "edis/ast.hpp"

namespace edis {

/// Result of a dictionary lookup. An empty optional is a stuck lookup: no
/// clause applies, which is not the same as any default tag.
using Lookup = std::optional<TypeTag>;

Lookup dict_get(const TypeDict& xs, std::string_view k);
TypeDict dict_set(TypeDict xs, std::string_view k, TypeTag x);
TypeDict dict_del(TypeDict xs, std::string_view k);
bool dict_member(const TypeDict& xs, std::string_view k);

Lookup hash_get(const TypeDict& xs, std::string_view k, std::string_view f);
TypeDict hash_set(TypeDict xs, std::string_view k, std::string_view f, TypeTag a);
TypeDict hash_del(TypeDict xs, std::string_view k, std::string_view f);
bool hash_member(const TypeDict& xs, std::string_view k, std::string_view f);

bool is_string(const TypeTag& t);
bool is_list(const TypeTag& t);
bool is_set(const TypeTag& t);
bool is_hash(const TypeTag& t);

using TagPredicate = bool (*)(const TypeTag&);

/// `(pred (Get xs k)) Or Not (Member xs k)`: the key holds a tag satisfying
/// `pred`, or it is absent.
bool or_nx(TagPredicate pred, const TypeDict& xs, std::string_view k);

}  // namespace edis
