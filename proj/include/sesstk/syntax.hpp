#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "sesstk/types.hpp"

namespace sesstk {

using Name = std::string;
using NameSet = std::set<Name>;

enum class Dialect : std::uint8_t { Session, CH, PI };

const char* to_string(Dialect d);
/// Accepts "session"/"st", "ch", "pi"/"kb" (case-insensitive).
std::optional<Dialect> parse_dialect(std::string_view text);

struct Value {
  enum class Kind : std::uint8_t { Chan, Variant };

  Kind kind = Kind::Chan;
  std::string name;          // channel name, or variant label
  std::vector<Value> inner;  // Variant: exactly one payload

  static Value chan(Name n);
  static Value variant(std::string label, Value payload);

  bool is_chan() const { return kind == Kind::Chan; }
  const Value& payload() const { return inner.at(0); }

  friend bool operator==(const Value&, const Value&) = default;
};

/// Unified process AST for the three dialects.
///
/// Field use per kind:
///   Out        subject, values, children = {cont}, bound (CH bound output x!(y).P)
///   In         subject, binders, children = {cont}
///   Sel        subject, labels = {l}, children = {cont}
///   Branch     subject, labels (sorted), children aligned with labels
///   Par        children = {left, right}
///   ResSession subject = x, other = y, st (type of x), children = {body}
///   Res        subject = x, ut, children = {body}
///   Fwd        subject = x, other = y
///   Case       values = {scrutinee}, labels (sorted), binders and children aligned
struct Process {
  enum class Kind : std::uint8_t { Inact, Out, In, Sel, Branch, Par, ResSession, Res, Fwd, Case };

  Kind kind = Kind::Inact;
  Name subject;
  Name other;
  std::vector<Value> values;
  std::vector<Name> binders;
  std::vector<std::string> labels;
  std::vector<Process> children;
  bool bound = false;
  std::optional<SessionType> st;
  std::optional<UsageType> ut;

  static Process inact();
  static Process out(Name x, std::vector<Value> vs, Process cont);
  static Process bound_out(Name x, Name y, Process cont);
  static Process in(Name x, std::vector<Name> ys, Process cont);
  static Process sel(Name x, std::string label, Process cont);
  static Process branch(Name x, std::vector<std::pair<std::string, Process>> alts);
  static Process par(Process a, Process b);
  /// Left-nested parallel of all parts; inact for an empty list.
  static Process par_all(std::vector<Process> parts);
  static Process res_session(Name x, Name y, std::optional<SessionType> t, Process body);
  static Process res(Name x, Process body, std::optional<UsageType> t = std::nullopt);
  static Process fwd(Name x, Name y);
  static Process case_of(Value v, std::vector<std::tuple<std::string, Name, Process>> alts);

  bool is_inact() const { return kind == Kind::Inact; }
  bool is_prefix() const {
    return kind == Kind::Out || kind == Kind::In || kind == Kind::Sel || kind == Kind::Branch;
  }
  const Process& cont() const { return children.at(0); }
  const Process* alt(std::string_view label) const;

  friend bool operator==(const Process&, const Process&) = default;
};

Process parse_process(std::string_view text, Dialect dialect);
std::string render(const Value& v);
std::string render(const Process& p);

/// Throws DialectError naming the first construct outside the dialect.
void validate(const Process& p, Dialect dialect);
bool is_valid(const Process& p, Dialect dialect);

NameSet free_names(const Value& v);
NameSet free_names(const Process& p);
/// Every name occurring in p, free or bound.
NameSet all_names(const Process& p);

/// Number of communication prefixes (out, in, select, branch).
std::size_t prefix_count(const Process& p);
/// Prefixes plus forwarders.
std::size_t action_count(const Process& p);

/// First of base0, base1, ... not in `avoid`; the result is added to `avoid`.
Name fresh_name(std::string_view base, NameSet& avoid);

using Substitution = std::map<Name, Value>;

/// Capture-avoiding simultaneous substitution. Bound names that would capture
/// are renamed to fresh "%r" names. Throws std::invalid_argument when a variant
/// would land in a subject position.
Process substitute(const Process& p, const Substitution& s);
Process rename(const Process& p, const Name& from, const Name& to);

/// Equality up to consistent renaming of bound names; no reordering of Par.
bool alpha_equiv(const Process& p, const Process& q);

/// Top-level components of a Par tree (Inact dropped).
std::vector<Process> par_components(const Process& p);

struct Restriction {
  bool pair = false;  // new(x,y) versus new x
  Name x;
  Name y;
  std::optional<SessionType> st;
  std::optional<UsageType> ut;

  friend bool operator==(const Restriction&, const Restriction&) = default;
};

/// A process viewed as restrictions over a flat parallel of components. No
/// component is a Par, Res, ResSession or Inact.
struct Soup {
  std::vector<Restriction> restrictions;
  std::vector<Process> components;
};

/// Extrudes every top-level restriction; clashing binders are renamed to
/// fresh "%t" names. Unused restrictions are kept.
Soup flatten(const Process& p);
Process assemble(const Soup& s);
/// Drops restrictions whose names occur free in no component.
void collect_garbage(Soup& s);

/// Canonical representative of the structural congruence class: flattened,
/// garbage-collected, components sorted, binders named "%<level>".
Process normal_form(const Process& p);

}  // namespace sesstk
