#pragma once

#include <compare>
#include <initializer_list>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sesstk/error.hpp"

namespace sesstk {

// ---------------------------------------------------------------------------
// Session types: end | ?T.S | !T.S | &{l:S} | +{l:S}
// ---------------------------------------------------------------------------

/// Labelled alternatives are kept sorted by label so that equality, duality
/// and the encodings are syntactically deterministic.
struct SessionType {
  enum class Kind : std::uint8_t { End, In, Out, Branch, Select };

  Kind kind = Kind::End;
  std::vector<SessionType> args;    // In/Out: {payload, continuation}; choices: one per label
  std::vector<std::string> labels;  // Branch/Select only

  static SessionType end();
  static SessionType in(SessionType payload, SessionType cont);
  static SessionType out(SessionType payload, SessionType cont);
  static SessionType branch(std::vector<std::pair<std::string, SessionType>> alts);
  static SessionType select(std::vector<std::pair<std::string, SessionType>> alts);

  bool is_end() const { return kind == Kind::End; }
  const SessionType& payload() const { return args.at(0); }
  const SessionType& cont() const { return args.at(1); }
  /// Continuation for a label, or nullptr.
  const SessionType* alt(std::string_view label) const;

  std::size_t depth() const;
  std::size_t size() const;

  friend bool operator==(const SessionType&, const SessionType&) = default;
};

// ---------------------------------------------------------------------------
// C-types (linear logic propositions with mix, bot = 1 written bullet)
// ---------------------------------------------------------------------------

struct CType {
  enum class Kind : std::uint8_t { Bullet, Tensor, Par, With, Plus };

  Kind kind = Kind::Bullet;
  std::vector<CType> args;
  std::vector<std::string> labels;  // With/Plus only

  static CType bullet();
  static CType tensor(CType a, CType b);
  static CType par(CType a, CType b);
  static CType with(std::vector<std::pair<std::string, CType>> alts);
  static CType plus(std::vector<std::pair<std::string, CType>> alts);

  friend bool operator==(const CType&, const CType&) = default;
};

// ---------------------------------------------------------------------------
// Usages and usage types
// ---------------------------------------------------------------------------

/// Obligation/capability results: a natural, or OMEGA for "no such action".
struct Level {
  bool omega = true;
  unsigned value = 0;

  static Level finite(unsigned v) { return Level{false, v}; }
  static Level infinite() { return Level{}; }

  friend bool operator==(const Level&, const Level&) = default;
};

/// OMEGA is only below OMEGA.
bool level_leq(Level a, Level b);
Level level_min(Level a, Level b);
std::string to_string(Level l);

/// A level annotation inside a usage: a concrete natural or a level variable.
struct LevelTerm {
  bool is_var = false;
  unsigned n = 0;  // value, or variable id

  static LevelTerm constant(unsigned v) { return LevelTerm{false, v}; }
  static LevelTerm var(unsigned id) { return LevelTerm{true, id}; }

  friend auto operator<=>(const LevelTerm&, const LevelTerm&) = default;
};

/// Hands out fresh level variables.
class LevelSupply {
 public:
  explicit LevelSupply(unsigned first = 0) : next_(first) {}
  LevelTerm fresh() { return LevelTerm::var(next_++); }
  unsigned count() const { return next_; }

 private:
  unsigned next_;
};

enum class Polarity : std::uint8_t { In, Out };

inline Polarity opposite(Polarity p) { return p == Polarity::In ? Polarity::Out : Polarity::In; }

struct Usage {
  enum class Kind : std::uint8_t { Empty, Act, Par };

  Kind kind = Kind::Empty;
  Polarity pol = Polarity::In;  // Act only
  LevelTerm ob;                 // Act only
  LevelTerm cap;                // Act only
  std::vector<Usage> parts;     // Act: {continuation}; Par: {left, right}

  static Usage empty();
  static Usage act(Polarity pol, LevelTerm ob, LevelTerm cap, Usage cont = Usage::empty());
  static Usage par(Usage a, Usage b);

  bool is_empty() const { return kind == Kind::Empty; }
  bool is_concrete() const;
  std::size_t action_count() const;

  friend bool operator==(const Usage&, const Usage&) = default;
};

struct UsageType {
  enum class Kind : std::uint8_t { Chan, Variant };

  Kind kind = Kind::Chan;
  Usage usage;
  std::vector<UsageType> args;      // Chan: payload types (<= 2); Variant: one per label
  std::vector<std::string> labels;  // Variant only

  static UsageType chan(Usage u, std::vector<UsageType> payloads = {});
  static UsageType variant(std::vector<std::pair<std::string, UsageType>> alts);

  bool is_concrete() const;

  friend bool operator==(const UsageType&, const UsageType&) = default;
};

// ---------------------------------------------------------------------------
// Duality
// ---------------------------------------------------------------------------

SessionType dual(const SessionType& t);
CType dual(const CType& t);
Usage dual(const Usage& u);
/// Swaps input/output in the usage; payload types are left unchanged.
/// Throws std::invalid_argument for variant types.
UsageType dual(const UsageType& t);

// ---------------------------------------------------------------------------
// Type encodings
// ---------------------------------------------------------------------------

/// Session type to usage type, one fresh (o, k) pair per prefix. The output
/// and select cases encode the dual continuation.
UsageType encode_su(const SessionType& t, LevelSupply& levels);
/// Same, with every obligation and capability fixed to the given constants.
UsageType encode_su(const SessionType& t, unsigned ob, unsigned cap);
CType encode_c(const SessionType& t);

// ---------------------------------------------------------------------------
// Typing contexts
// ---------------------------------------------------------------------------

/// Ordered finite map from names to types of a single type language.
template <class T>
class Context {
 public:
  using Binding = std::pair<std::string, T>;

  Context() = default;
  Context(std::initializer_list<Binding> init) {
    for (const auto& b : init) set(b.first, b.second);
  }

  const T* find(std::string_view name) const {
    for (const auto& b : bindings_)
      if (b.first == name) return &b.second;
    return nullptr;
  }
  T* find(std::string_view name) {
    for (auto& b : bindings_)
      if (b.first == name) return &b.second;
    return nullptr;
  }
  bool contains(std::string_view name) const { return find(name) != nullptr; }

  /// Updates in place, or appends a new binding at the end.
  void set(const std::string& name, T value) {
    if (T* slot = find(name)) {
      *slot = std::move(value);
    } else {
      bindings_.emplace_back(name, std::move(value));
    }
  }
  bool erase(std::string_view name) {
    for (auto it = bindings_.begin(); it != bindings_.end(); ++it) {
      if (it->first == name) {
        bindings_.erase(it);
        return true;
      }
    }
    return false;
  }

  const std::vector<Binding>& bindings() const { return bindings_; }
  std::size_t size() const { return bindings_.size(); }
  bool empty() const { return bindings_.empty(); }
  auto begin() const { return bindings_.begin(); }
  auto end() const { return bindings_.end(); }

  friend bool operator==(const Context&, const Context&) = default;

 private:
  std::vector<Binding> bindings_;
};

using STContext = Context<SessionType>;
using CHContext = Context<CType>;
using KBContext = Context<UsageType>;

/// Pointwise encode_su. `rename` maps a session name to its encoded channel
/// (identity when absent).
KBContext encode_ctx_su(const STContext& g, LevelSupply& levels,
                        const Context<std::string>& rename = {});
CHContext encode_ctx_c(const STContext& g);

// ---------------------------------------------------------------------------
// Surface syntax
// ---------------------------------------------------------------------------

std::string render(const SessionType& t);
std::string render(const CType& t);
std::string render(const LevelTerm& l);
std::string render(const Usage& u);
std::string render(const UsageType& t);

SessionType parse_session_type(std::string_view text);
CType parse_ctype(std::string_view text);
UsageType parse_usage_type(std::string_view text);
Usage parse_usage(std::string_view text);

/// Context files: one "name : type" per line, "--" comments.
STContext parse_st_context(std::string_view text);
CHContext parse_ch_context(std::string_view text);
KBContext parse_kb_context(std::string_view text);

template <class T>
std::string render_context(const Context<T>& g) {
  std::string out;
  for (const auto& [name, type] : g) {
    if (!out.empty()) out += ", ";
    out += name + ": " + render(type);
  }
  return out;
}

}  // namespace sesstk
