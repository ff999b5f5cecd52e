#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sesstk/types.hpp"

namespace sesstk::detail {

/// Type term with duality-aware variables. A variable carries a negation flag
/// (x̄ is the dual of whatever x resolves to). Choice nodes carry an optional
/// row variable standing for further labels, also with a negation flag.
struct UTerm {
  enum class Kind { Var, Con, Choice };

  Kind kind = Kind::Con;
  unsigned id = 0;
  bool neg = false;
  std::string ctor;
  std::vector<UTerm> args;
  std::vector<std::string> labels;
  std::optional<std::pair<unsigned, bool>> tail;

  static UTerm var(unsigned id, bool neg = false);
  static UTerm con(std::string ctor, std::vector<UTerm> args = {});
  /// Labels are sorted on construction.
  static UTerm choice(std::string ctor, std::vector<std::pair<std::string, UTerm>> alts,
                      std::optional<std::pair<unsigned, bool>> tail = std::nullopt);
};

struct Signature {
  struct Dual {
    std::string ctor;
    std::vector<bool> dualize;  // per argument; choice nodes dualize every argument
  };
  std::map<std::string, Dual> duals;
  std::string self_dual;  // the only constant equal to its own dual
};

const Signature& ctype_signature();
const Signature& session_signature();

class Unifier {
 public:
  explicit Unifier(const Signature& sig) : sig_(sig) {}

  UTerm fresh() { return UTerm::var(next_var_++); }
  std::pair<unsigned, bool> fresh_row() { return {next_row_++, false}; }

  UTerm dual(const UTerm& t) const;
  /// Head-normal form: bound variables and bound row tails expanded.
  UTerm walk(const UTerm& t) const;
  UTerm resolve(const UTerm& t) const;
  /// False on failure, with a message in last_error().
  bool unify(const UTerm& a, const UTerm& b);
  std::string render(const UTerm& t) const;
  const std::string& last_error() const { return error_; }

 private:
  struct Row {
    std::vector<std::string> labels;
    std::vector<UTerm> args;
    std::optional<std::pair<unsigned, bool>> tail;
  };

  bool bind(const UTerm& v, const UTerm& t);
  bool bind_row(std::pair<unsigned, bool> tail, Row row);
  bool unify_choice(const UTerm& a, const UTerm& b);
  bool occurs(unsigned id, const UTerm& t) const;
  bool occurs_row(unsigned id, const UTerm& t) const;
  bool fail(std::string msg);

  const Signature& sig_;
  std::map<unsigned, UTerm> vars_;
  std::map<unsigned, Row> rows_;
  unsigned next_var_ = 0;
  unsigned next_row_ = 0;
  std::string error_;
};

UTerm to_term(const CType& t);
UTerm to_term(const SessionType& t);
/// Of a resolved term; free variables default to the self-dual constant and
/// open rows are closed.
CType to_ctype(const UTerm& t);
SessionType to_session(const UTerm& t);

}  // namespace sesstk::detail
