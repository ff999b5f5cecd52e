#pragma once

#include <map>
#include <string>
#include <vector>

#include "sesstk/syntax.hpp"

namespace sesstk {

/// The encoding's renaming: session endpoint to its current channel.
using NameEnv = std::map<Name, Name>;

/// SESSION to CH: free outputs become bound outputs plus a forwarder, and each
/// restricted pair collapses to one name.
Process translate_ch(const Process& p);

/// Continuation-passing encoding of a SESSION process into the PI dialect.
/// Names outside f map to themselves.
Process encode_proc(const Process& p, const NameEnv& f = {});

struct TypedEncoding {
  /// Encoded context with one level variable per action.
  KBContext context;
  /// encode_proc(p) with every restriction annotated by a usage type.
  Process process;
  /// Level variables used are 0 .. level_count-1.
  unsigned level_count = 0;
};

/// encode_proc plus usage-type annotations derived from the session types.
/// Throws TypeErrorException when p is not typable by g (MissingAnnotation,
/// UnboundName, TypeMismatch).
TypedEncoding encode_typed(const STContext& g, const Process& p);

/// Usage type of a restricted session channel of type t: both endpoint usages
/// in parallel over the payloads of t.
UsageType encode_pair(const SessionType& t, LevelSupply& levels);

/// Canonical characteristic process of t on x (CH dialect).
Process char_proc(const SessionType& t, const Name& x);

/// A process with exactly one hole.
struct ProcessContext {
  Process term;

  static ProcessContext hole();
  Process plug(const Process& q) const;
  std::string render() const;
};

/// C_{} = hole, C_{G, x:T} = new x (C_G | char_proc(dual T, x)).
ProcessContext catalyzer(const STContext& g);

/// new k (k#inx.0 | k&{inl: p1, inr: p2}). Throws std::invalid_argument when
/// k is free in p1 or p2 or inx is not inl/inr.
Process fakepar(const Process& p1, const Process& p2, const Name& k, const std::string& inx = "inl");

struct RewriteOptions {
  std::string inx = "inl";
};

/// Rewrites a well-typed SESSION process into the CH dialect so that every
/// parallel cluster shares at most one session. Throws TypeErrorException when
/// check_st(g, p) fails.
Process rewrite(const STContext& g, const Process& p, const RewriteOptions& opts = {});

}  // namespace sesstk
