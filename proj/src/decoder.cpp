#include "tempra/decoder.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <set>

namespace tempra {

ParserState ParserState::initial() {
  ParserState s;
  s.frontier_.push_back(Symbol::Start);
  return s;
}

Symbol ParserState::frontier_top() const {
  if (frontier_.empty()) throw std::logic_error("terminal state has no frontier top");
  return frontier_.back();
}

const ExprPtr& ParserState::root() const {
  if (!terminal() || !root_) throw std::logic_error("state is not a completed derivation");
  return root_;
}

std::optional<AllenRelation> ParserState::enclosing_relation() const {
  if (frames_.empty() || frames_.back().kind != Frame::Kind::Unary) return std::nullopt;
  return frames_.back().rel;
}

std::optional<ParserState> ParserState::apply(const Production& action) const {
  ParserState next = *this;
  next.frontier_.pop_back();
  next.actions_.push_back(action);
  switch (action.kind) {
    case Production::Kind::StartToInterval:
      next.frontier_.push_back(Symbol::TimeInterval);
      break;
    case Production::Kind::ApplyFn1:
      next.frontier_.push_back(Symbol::TimeInterval);
      next.frontier_.push_back(Symbol::Fn1);
      break;
    case Production::Kind::ApplyFn2:
      next.frontier_.push_back(Symbol::TimeInterval);
      next.frontier_.push_back(Symbol::TimeInterval);
      next.frontier_.push_back(Symbol::Fn2);
      break;
    case Production::Kind::Fn1Name: {
      Frame frame;
      frame.kind = Frame::Kind::Unary;
      frame.rel = action.rel;
      next.frames_.push_back(std::move(frame));
      break;
    }
    case Production::Kind::Fn2Name: {
      Frame frame;
      frame.kind = Frame::Kind::Binary;
      frame.op = action.op;
      next.frames_.push_back(std::move(frame));
      break;
    }
    case Production::Kind::Constant: {
      ExprPtr expr = Expr::constant(action.label);
      for (;;) {
        if (next.frames_.empty()) {
          next.root_ = std::move(expr);
          break;
        }
        Frame& frame = next.frames_.back();
        if (frame.kind == Frame::Kind::Unary) {
          expr = Expr::relation(frame.rel, std::move(expr));
          next.frames_.pop_back();
          continue;
        }
        if (frame.children.empty()) {
          frame.children.push_back(std::move(expr));
          break;
        }
        if (expr_equal(frame.children.front(), expr)) return std::nullopt;
        expr = Expr::set_op(frame.op, frame.children.front(), std::move(expr));
        next.frames_.pop_back();
      }
      break;
    }
  }
  return next;
}

int ParserState::min_completion(const Vocabulary& vocab) const {
  int total = 0;
  for (Symbol s : frontier_) {
    switch (s) {
      case Symbol::Start: total += 2; break;
      case Symbol::TimeInterval: total += 1; break;
      case Symbol::Fn1: total += 1; break;
      case Symbol::Fn2: total += 1; break;
    }
  }
  // With a sole constant, a set operation's arguments cannot both be that
  // constant: the cheaper completion of an unstarted pair spends 3 actions on
  // one side, (f c) instead of c. At most one pair is unstarted at a time and
  // it always sits at the frontier top.
  if (vocab.size() == 1 && !frontier_.empty()) {
    if (frontier_.back() == Symbol::Fn2) {
      total += 2;
    } else if (frontier_.back() == Symbol::TimeInterval && !frames_.empty() &&
               frames_.back().kind == Frame::Kind::Binary) {
      const Frame& frame = frames_.back();
      if (frame.children.empty()) {
        total += 2;
      } else {
        const ExprPtr& first = frame.children.front();
        if (first->kind == Expr::Kind::Constant &&
            first->label == vocab.entries().front().label) {
          total += 2;
        }
      }
    }
  }
  return total;
}

std::optional<ParserState> ParserState::admit(const ParserState& state, const Production& action,
                                              const Vocabulary& vocab, int max_actions,
                                              std::string* why) {
  const auto reject = [&](std::string reason) -> std::optional<ParserState> {
    if (why) *why = std::move(reason);
    return std::nullopt;
  };
  if (state.terminal()) return reject("state is terminal");
  if (action.lhs() != state.frontier_top()) {
    return reject(action.to_string() + " does not expand " +
                  std::string(to_string(state.frontier_top())));
  }
  if (action.kind == Production::Kind::Constant && !vocab.contains(action.label)) {
    return reject("unknown constant '" + action.label + "'");
  }
  if (action.kind == Production::Kind::Fn1Name) {
    if (action.rel == AllenRelation::Equals) {
      return reject("the equals function never changes a denotation");
    }
    const auto outer = state.enclosing_relation();
    if (outer && composition_collapses(*outer, action.rel)) {
      return reject("nesting " + std::string(to_string(action.rel)) + " under " +
                    std::string(to_string(*outer)) + " collapses");
    }
  }
  auto next = state.apply(action);
  if (!next) {
    return reject("set operation would receive two copies of the same argument");
  }
  if (next->length() + next->min_completion(vocab) > max_actions) {
    return reject("cannot complete within " + std::to_string(max_actions) + " actions");
  }
  return next;
}

std::vector<Production> valid_actions(const ParserState& state, const Vocabulary& vocab,
                                      int max_actions) {
  std::vector<Production> out;
  if (state.terminal()) return out;
  for (const Production& p : productions_for(state.frontier_top(), vocab)) {
    if (ParserState::admit(state, p, vocab, max_actions, nullptr)) out.push_back(p);
  }
  return out;
}

ParserState step(const ParserState& state, const Production& action, const Vocabulary& vocab,
                 int max_actions) {
  std::string why;
  auto next = ParserState::admit(state, action, vocab, max_actions, &why);
  if (!next) throw std::invalid_argument("invalid action: " + why);
  return *std::move(next);
}

namespace {

/// True when every set operation lists its greater-printing argument first,
/// the order the enumerator emits.
bool canonical_arguments(const ExprPtr& expr) {
  switch (expr->kind) {
    case Expr::Kind::Constant:
      return true;
    case Expr::Kind::Relation:
      return canonical_arguments(expr->child);
    case Expr::Kind::SetOp:
      return LogicalForm(expr->left).print() >= LogicalForm(expr->right).print() &&
             canonical_arguments(expr->left) && canonical_arguments(expr->right);
  }
  return true;
}

}  // namespace

Scorer uniform_scorer() {
  return [](const ParserState&, const Production&) { return 0.0; };
}

std::vector<ScoredForm> beam_search(const Vocabulary& vocab, const Scorer& scorer,
                                    const BeamConfig& cfg) {
  if (cfg.beam_width < 1) throw std::invalid_argument("beam_width must be at least 1");
  if (cfg.max_actions < 2) {
    throw std::invalid_argument("max_actions must be at least 2 (START plus a constant)");
  }
  if (vocab.empty()) throw std::invalid_argument("vocabulary is empty");

  struct Hypothesis {
    ParserState state;
    double score = 0.0;
  };

  // All live hypotheses have equal action counts, and expansion visits
  // hypotheses and productions in order, so stable sorting by score keeps
  // ties in action-sequence order.
  std::vector<Hypothesis> live;
  live.push_back(Hypothesis{ParserState::initial(), 0.0});
  std::vector<ScoredForm> completed;

  while (!live.empty()) {
    std::vector<Hypothesis> expanded;
    for (const Hypothesis& h : live) {
      for (const Production& p : valid_actions(h.state, vocab, cfg.max_actions)) {
        ParserState next = step(h.state, p, vocab, cfg.max_actions);
        const double score = h.score + scorer(h.state, p);
        if (next.terminal()) {
          if (canonical_arguments(next.root())) {
            ScoredForm f{LogicalForm(next.root()), score, next.actions()};
            completed.push_back(std::move(f));
          }
        } else {
          expanded.push_back(Hypothesis{std::move(next), score});
        }
      }
    }
    std::stable_sort(expanded.begin(), expanded.end(),
                     [](const Hypothesis& a, const Hypothesis& b) { return a.score > b.score; });
    if (expanded.size() > static_cast<std::size_t>(cfg.beam_width)) {
      expanded.resize(static_cast<std::size_t>(cfg.beam_width));
    }
    live = std::move(expanded);
  }

  struct Ranked {
    std::size_t index;
    double score;
    std::size_t length;
    std::string print;
  };
  std::vector<Ranked> order;
  order.reserve(completed.size());
  for (std::size_t i = 0; i < completed.size(); ++i) {
    order.push_back(Ranked{i, completed[i].score, completed[i].actions.size(),
                           completed[i].form.print()});
  }
  std::sort(order.begin(), order.end(), [](const Ranked& a, const Ranked& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.length != b.length) return a.length < b.length;
    return a.print < b.print;
  });
  std::vector<ScoredForm> ranked;
  ranked.reserve(order.size());
  for (const Ranked& r : order) ranked.push_back(std::move(completed[r.index]));
  return ranked;
}

TriggerTable TriggerTable::defaults() {
  TriggerTable t;
  t.triggers = {
      {"before", AllenRelation::Before}, {"after", AllenRelation::After},
      {"while", AllenRelation::During},  {"during", AllenRelation::During},
      {"until", AllenRelation::Meets},   {"when", AllenRelation::Equals},
  };
  return t;
}

namespace {

std::string ascii_lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::set<std::string> bonus_labels(const SentenceContext& context) {
  const auto& order = context.annotation_order;
  const auto not_focus = [&](const Vocabulary::Entry& e) {
    return !context.focus || e.label != *context.focus;
  };

  std::vector<std::size_t> candidates;
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (order[i].kind == NodeKind::Event && not_focus(order[i])) candidates.push_back(i);
  }
  if (candidates.empty()) {
    for (std::size_t i = 0; i < order.size(); ++i) {
      if (not_focus(order[i])) candidates.push_back(i);
    }
  }
  if (candidates.empty()) {
    for (std::size_t i = 0; i < order.size(); ++i) candidates.push_back(i);
  }

  std::set<std::string> bonus;
  if (candidates.empty()) return bonus;

  std::optional<std::size_t> focus_pos;
  if (context.focus) {
    for (std::size_t i = 0; i < order.size(); ++i) {
      if (order[i].label == *context.focus) {
        focus_pos = i;
        break;
      }
    }
  }
  if (!focus_pos) {
    for (std::size_t i : candidates) bonus.insert(order[i].label);
    return bonus;
  }

  std::size_t best = candidates.front();
  std::size_t best_distance = std::numeric_limits<std::size_t>::max();
  for (std::size_t i : candidates) {
    const std::size_t d = i > *focus_pos ? i - *focus_pos : *focus_pos - i;
    if (d < best_distance) {
      best = i;
      best_distance = d;
    }
  }
  bonus.insert(order[best].label);
  return bonus;
}

}  // namespace

Scorer lexical_scorer(const std::vector<std::string>& tokens, const TriggerTable& triggers,
                      const SentenceContext& context) {
  RelationSet triggered;
  for (const std::string& token : tokens) {
    const auto it = triggers.triggers.find(ascii_lower(token));
    if (it != triggers.triggers.end()) triggered |= it->second;
  }
  std::set<std::string> bonus = bonus_labels(context);

  // Each bonus pays out once per derivation: repeat applications score 0, so
  // stacking one cue, as in (before (after (before x))), cannot outrank the
  // simple form it suggests.
  return [triggered, bonus = std::move(bonus)](const ParserState& state,
                                               const Production& action) {
    switch (action.kind) {
      case Production::Kind::Fn1Name: {
        if (!triggered.contains(action.rel)) return 0.0;
        for (const Production& prior : state.actions()) {
          if (prior.kind == Production::Kind::Fn1Name && prior.rel == action.rel) return 0.0;
        }
        return 1.0;
      }
      case Production::Kind::Constant: {
        if (!bonus.count(action.label)) return 0.0;
        for (const Production& prior : state.actions()) {
          if (prior.kind == Production::Kind::Constant && prior.label == action.label) {
            return 0.0;
          }
        }
        return 0.5;
      }
      default:
        return 0.0;
    }
  };
}

}  // namespace tempra
