#include "sesstk/generate.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "sesstk/check_st.hpp"

namespace sesstk {

namespace {

const std::vector<std::vector<std::string>> kLabelSets = {{"a"}, {"a", "b"}};

std::vector<std::pair<std::string, SessionType>> zip(const std::vector<std::string>& ls,
                                                     const std::vector<SessionType>& ts) {
  std::vector<std::pair<std::string, SessionType>> out;
  for (std::size_t i = 0; i < ls.size(); ++i) out.emplace_back(ls[i], ts[i]);
  return out;
}

}  // namespace

std::vector<SessionType> types_up_to_depth(std::size_t depth) {
  std::vector<SessionType> level{SessionType::end()};
  for (std::size_t d = 1; d <= depth; ++d) {
    std::vector<SessionType> next{SessionType::end()};
    next.reserve(1 + 4 * level.size() * level.size() + 2 * level.size());
    for (const auto& a : level)
      for (const auto& b : level) {
        next.push_back(SessionType::in(a, b));
        next.push_back(SessionType::out(a, b));
      }
    for (const auto& a : level) {
      next.push_back(SessionType::branch({{"a", a}}));
      next.push_back(SessionType::select({{"a", a}}));
    }
    for (const auto& a : level)
      for (const auto& b : level) {
        next.push_back(SessionType::branch({{"a", a}, {"b", b}}));
        next.push_back(SessionType::select({{"a", a}, {"b", b}}));
      }
    level = std::move(next);
  }
  return level;
}

std::vector<SessionType> spine_types(std::size_t depth) {
  std::vector<SessionType> level{SessionType::end()};
  const SessionType e = SessionType::end();
  for (std::size_t d = 1; d <= depth; ++d) {
    std::vector<SessionType> next{e};
    for (const auto& a : level) {
      next.push_back(SessionType::in(e, a));
      next.push_back(SessionType::out(e, a));
      if (!a.is_end()) {
        next.push_back(SessionType::in(a, e));
        next.push_back(SessionType::out(a, e));
      }
      next.push_back(SessionType::branch({{"a", a}}));
      next.push_back(SessionType::select({{"a", a}}));
      next.push_back(SessionType::branch({{"a", a}, {"b", e}}));
      next.push_back(SessionType::select({{"a", a}, {"b", e}}));
      if (!a.is_end()) {
        next.push_back(SessionType::branch({{"a", e}, {"b", a}}));
        next.push_back(SessionType::select({{"a", e}, {"b", a}}));
      }
    }
    level = std::move(next);
  }
  return level;
}

std::vector<SessionType> type_population() {
  std::vector<SessionType> out = types_up_to_depth(3);
  for (auto& t : spine_types(5))
    if (t.depth() > 3) out.push_back(std::move(t));
  return out;
}

SessionType random_session_type(std::mt19937_64& rng, std::size_t depth) {
  if (depth == 0) return SessionType::end();
  std::uniform_int_distribution<int> pick(0, 9);
  int k = pick(rng);
  auto sub = [&](bool payload) {
    if (payload && pick(rng) < 7) return SessionType::end();
    return random_session_type(rng, depth - 1);
  };
  if (k == 0) return SessionType::end();
  if (k <= 3) {
    SessionType p = sub(true);
    return SessionType::in(p, sub(false));
  }
  if (k <= 6) {
    SessionType p = sub(true);
    return SessionType::out(p, sub(false));
  }
  const auto& labels = kLabelSets[pick(rng) % 2];
  std::vector<SessionType> alts;
  for (std::size_t i = 0; i < labels.size(); ++i) alts.push_back(sub(false));
  return k <= 8 ? SessionType::select(zip(labels, alts)) : SessionType::branch(zip(labels, alts));
}

namespace {

using Env = std::vector<std::pair<Name, SessionType>>;

class TermGen {
 public:
  TermGen(std::mt19937_64& rng, const GenOptions& opts) : rng_(rng), opts_(opts) {}

  Process top() { return group({}); }

 private:
  std::mt19937_64& rng_;
  const GenOptions& opts_;
  std::size_t sessions_ = 0;
  std::size_t names_ = 0;

  bool chance(int percent) {
    return std::uniform_int_distribution<int>(0, 99)(rng_) < percent;
  }
  std::size_t below(std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_);
  }
  Name fresh(const char* stem) { return stem + std::to_string(++names_); }

  SessionType live_type() {
    for (;;) {
      SessionType t = random_session_type(rng_, opts_.max_type_depth);
      if (!t.is_end()) return t;
    }
  }

  Process group(const Env& env) {
    std::size_t k = 1;
    while (k < opts_.max_group && chance(60)) ++k;
    Env left, right;
    for (const auto& b : env) (chance(50) ? left : right).push_back(b);
    std::vector<std::tuple<Name, Name, SessionType>> rs;
    for (std::size_t i = 0; i < k; ++i) {
      ++sessions_;
      SessionType t = live_type();
      Name x = fresh("x"), y = fresh("y");
      left.emplace_back(x, t);
      right.emplace_back(y, dual(t));
      rs.emplace_back(x, y, t);
    }
    std::shuffle(left.begin(), left.end(), rng_);
    std::shuffle(right.begin(), right.end(), rng_);
    Process body = Process::par(impl(left), impl(right));
    for (auto it = rs.rbegin(); it != rs.rend(); ++it)
      body = Process::res_session(std::get<0>(*it), std::get<1>(*it), std::get<2>(*it), std::move(body));
    return body;
  }

  Process impl(Env env) {
    std::erase_if(env, [](const auto& b) { return b.second.is_end(); });
    if (env.empty()) {
      if (sessions_ < 4 && chance(10)) return group({});
      return Process::inact();
    }
    if (sessions_ < 4 && chance(12)) return group(env);
    std::size_t i = below(env.size());
    auto [u, t] = env[i];
    using K = SessionType::Kind;
    switch (t.kind) {
      case K::Out: {
        const SessionType& pay = t.payload();
        env[i].second = t.cont();
        if (pay.is_end()) return Process::out(u, {Value::chan("n")}, impl(env));
        for (std::size_t j = 0; j < env.size(); ++j) {
          if (j != i && env[j].second == pay && chance(60)) {
            Name v = env[j].first;
            env.erase(env.begin() + static_cast<std::ptrdiff_t>(j));
            return Process::out(u, {Value::chan(v)}, impl(env));
          }
        }
        ++sessions_;
        Name a = fresh("x"), b = fresh("y");
        Process send = Process::out(u, {Value::chan(a)}, impl(env));
        return Process::res_session(a, b, pay, Process::par(std::move(send), impl({{b, dual(pay)}})));
      }
      case K::In: {
        Name v = fresh("z");
        env[i].second = t.cont();
        env.emplace_back(v, t.payload());
        return Process::in(u, {v}, impl(env));
      }
      case K::Select: {
        std::size_t l = below(t.labels.size());
        env[i].second = t.args[l];
        return Process::sel(u, t.labels[l], impl(env));
      }
      case K::Branch: {
        std::vector<std::pair<std::string, Process>> alts;
        for (std::size_t l = 0; l < t.labels.size(); ++l) {
          Env e = env;
          e[i].second = t.args[l];
          alts.emplace_back(t.labels[l], impl(e));
        }
        return Process::branch(u, std::move(alts));
      }
      case K::End: break;
    }
    return Process::inact();
  }
};

}  // namespace

GeneratedTerm random_term(std::mt19937_64& rng, const GenOptions& opts) {
  STContext g{{"n", SessionType::end()}};
  for (;;) {
    TermGen gen(rng, opts);
    Process p = gen.top();
    std::size_t size = prefix_count(p);
    if (size == 0 || size > opts.max_prefixes) continue;
    STResult r = check_st(g, p);
    if (!r.ok()) throw std::logic_error("generated term rejected: " + r.error->record());
    return {g, std::move(p)};
  }
}

std::vector<GeneratedTerm> generate_terms(std::uint64_t seed, std::size_t count, const GenOptions& opts) {
  std::mt19937_64 rng(seed);
  std::vector<GeneratedTerm> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(random_term(rng, opts));
  return out;
}

}  // namespace sesstk
