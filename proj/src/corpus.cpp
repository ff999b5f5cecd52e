#include "sesstk/corpus.hpp"

#include <algorithm>
#include <stdexcept>

#include "sesstk/hierarchy.hpp"

namespace sesstk {

namespace {

struct Source {
  const char* name;
  const char* context;
  const char* process;
};

const Source kSources[] = {
    {"nil", "n: end", "0"},
    {"nil_par", "n: end", "0 | 0"},
    {"single", "n: end", "new(x,y:!end.end) (x!(n).0 | y?(s).0)"},
    {"cyclic", "n: end", "new(x,y:!end.end) new(w,z:!end.end) (x!(n).w!(n).0 | z?(t).y?(s).0)"},
    {"cyclic_fixed", "n: end", "new(x,y:!end.end) new(w,z:!end.end) (x!(n).w!(n).0 | y?(s).z?(t).0)"},
    {"ping_pong", "n: end", "new(x,y:?end.!end.end) (x?(a).x!(n).0 | y!(n).y?(b).0)"},
    {"stream", "n: end", "new(x,y:!end.!end.!end.end) (x!(n).x!(n).x!(n).0 | y?(a).y?(b).y?(c).0)"},
    {"relay", "n: end", "new(x,y:!end.end) (x!(n).0 | new(u,v:!end.end) (y?(a).u!(a).0 | v?(b).0))"},
    {"mix", "n: end",
     "new(x,y:!end.end) (x!(n).0 | y?(a).0) | new(u,v:?end.end) (u?(b).0 | v!(n).0)"},
    {"select", "n: end", "new(x,y:+{a: end, b: end}) (x#a.0 | y&{a: 0, b: 0})"},
    {"branch_cont", "n: end",
     "new(x,y:&{a: !end.end, b: ?end.end}) (x&{a: x!(n).0, b: x?(z).0} | y#a.y?(w).0)"},
    {"delegation", "n: end",
     "new(x,y:!(?end.end).end) (new(u,v:?end.end) (x!(u).0 | v!(n).0) | y?(w).w?(z).0)"},
    {"send_back", "n: end",
     "new(x,y:?(!end.end).end) (x?(w).w!(n).0 | new(u,v:!end.end) (y!(u).0 | v?(z).0))"},
    {"ring_stuck", "n: end",
     "new(a,b:!end.end) new(c,d:!end.end) new(e,f:!end.end) "
     "(a!(n).d?(u).0 | c!(n).f?(v).0 | e!(n).b?(w).0)"},
    {"ring", "n: end",
     "new(a,b:!end.end) new(c,d:!end.end) new(e,f:!end.end) "
     "(a!(n).d?(u).0 | b?(w).e!(n).0 | f?(v).c!(n).0)"},
    {"select_pair", "n: end",
     "new(x,y:+{a: end}) new(u,v:!end.end) (x#a.u!(n).0 | y&{a: v?(z).0})"},
    {"open_out", "n: end\nc: !end.end", "c!(n).0"},
    {"open_relay", "c: ?end.end\nd: !end.end", "c?(a).d!(a).0"},
    {"open_branch", "n: end\nc: &{a: end, b: !end.end}", "c&{a: 0, b: c!(n).0}"},
    {"open_cut", "n: end\nc: !end.end",
     "new(x,y:?end.end) (x?(a).c!(a).0 | y!(n).0)"},
};

bool all_end(const STContext& g) {
  return std::all_of(g.bindings().begin(), g.bindings().end(),
                     [](const auto& b) { return b.second.is_end(); });
}

std::vector<CorpusEntry> build() {
  std::vector<CorpusEntry> out;
  for (const auto& s : kSources) {
    CorpusEntry e{s.name, parse_st_context(s.context), parse_process(s.process, Dialect::Session)};
    e.closed = all_end(e.context);
    out.push_back(std::move(e));
  }
  for (std::size_t n = 1; n <= 5; ++n) {
    Witness w = witness(n);
    CorpusEntry e{"witness" + std::to_string(n), w.context, w.process};
    e.closed = all_end(e.context);
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace

const std::vector<CorpusEntry>& corpus() {
  static const std::vector<CorpusEntry> entries = build();
  return entries;
}

const CorpusEntry& corpus_entry(const std::string& name) {
  for (const auto& e : corpus())
    if (e.name == name) return e;
  throw std::out_of_range("no corpus entry " + name);
}

}  // namespace sesstk
