#pragma once

#include <string>
#include <vector>

#include "sesstk/syntax.hpp"
#include "sesstk/types.hpp"

namespace sesstk {

struct CorpusEntry {
  std::string name;
  STContext context;
  Process process;
  /// Every binding of the context has type end.
  bool closed = false;
};

/// Built-in hand-written terms: the reference processes, the witness family and
/// small variations covering every session construct.
const std::vector<CorpusEntry>& corpus();

/// Entry by name; throws std::out_of_range.
const CorpusEntry& corpus_entry(const std::string& name);

}  // namespace sesstk
