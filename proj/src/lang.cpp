#include "tempra/lang.hpp"

#include <algorithm>
#include <cctype>

namespace tempra {

std::string_view to_string(SemanticType t) {
  switch (t) {
    case SemanticType::TimeInterval: return "TimeInterval";
    case SemanticType::Fn1: return "Fn1";
    case SemanticType::Fn2: return "Fn2";
  }
  return "?";
}

std::string_view to_string(Symbol s) {
  switch (s) {
    case Symbol::Start: return "START";
    case Symbol::TimeInterval: return "TimeInterval";
    case Symbol::Fn1: return "Fn1";
    case Symbol::Fn2: return "Fn2";
  }
  return "?";
}

std::string_view to_string(SetOp op) {
  return op == SetOp::Union ? "union" : "intersection";
}

Vocabulary::Vocabulary(std::vector<Entry> entries) {
  for (Entry& e : entries) add(std::move(e.label), e.kind);
}

void Vocabulary::add(std::string label, NodeKind kind) {
  if (kind == NodeKind::Reference) {
    throw std::invalid_argument("vocabulary entries must be events or timexes");
  }
  if (contains(label)) {
    throw std::invalid_argument("duplicate vocabulary label: '" + label + "'");
  }
  entries_.push_back(Entry{std::move(label), kind});
}

bool Vocabulary::contains(std::string_view label) const {
  return kind_of(label).has_value();
}

std::optional<NodeKind> Vocabulary::kind_of(std::string_view label) const {
  for (const Entry& e : entries_) {
    if (e.label == label) return e.kind;
  }
  return std::nullopt;
}

ExprPtr Expr::constant(std::string label) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::Constant;
  e->label = std::move(label);
  return e;
}

ExprPtr Expr::relation(AllenRelation rel, ExprPtr child) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::Relation;
  e->rel = rel;
  e->child = std::move(child);
  return e;
}

ExprPtr Expr::set_op(SetOp op, ExprPtr left, ExprPtr right) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::SetOp;
  e->op = op;
  e->left = std::move(left);
  e->right = std::move(right);
  return e;
}

bool expr_equal(const ExprPtr& a, const ExprPtr& b) {
  if (a == b) return true;
  if (!a || !b || a->kind != b->kind) return false;
  switch (a->kind) {
    case Expr::Kind::Constant: return a->label == b->label;
    case Expr::Kind::Relation: return a->rel == b->rel && expr_equal(a->child, b->child);
    case Expr::Kind::SetOp:
      return a->op == b->op && expr_equal(a->left, b->left) && expr_equal(a->right, b->right);
  }
  return false;
}

Production Production::start() { return Production{}; }

Production Production::apply_fn1() {
  Production p;
  p.kind = Kind::ApplyFn1;
  return p;
}

Production Production::apply_fn2() {
  Production p;
  p.kind = Kind::ApplyFn2;
  return p;
}

Production Production::fn1(AllenRelation r) {
  Production p;
  p.kind = Kind::Fn1Name;
  p.rel = r;
  return p;
}

Production Production::fn2(SetOp op) {
  Production p;
  p.kind = Kind::Fn2Name;
  p.op = op;
  return p;
}

Production Production::constant(std::string label) {
  Production p;
  p.kind = Kind::Constant;
  p.label = std::move(label);
  return p;
}

Symbol Production::lhs() const {
  switch (kind) {
    case Kind::StartToInterval: return Symbol::Start;
    case Kind::ApplyFn1:
    case Kind::ApplyFn2:
    case Kind::Constant: return Symbol::TimeInterval;
    case Kind::Fn1Name: return Symbol::Fn1;
    case Kind::Fn2Name: return Symbol::Fn2;
  }
  return Symbol::Start;
}

std::string Production::to_string() const {
  switch (kind) {
    case Kind::StartToInterval: return "START -> TimeInterval";
    case Kind::ApplyFn1: return "TimeInterval -> [Fn1, TimeInterval]";
    case Kind::ApplyFn2: return "TimeInterval -> [Fn2, TimeInterval, TimeInterval]";
    case Kind::Fn1Name: return "Fn1 -> " + std::string(tempra::to_string(rel));
    case Kind::Fn2Name: return "Fn2 -> " + std::string(tempra::to_string(op));
    case Kind::Constant: return "TimeInterval -> " + label;
  }
  return "?";
}

bool Production::operator==(const Production& other) const {
  if (kind != other.kind) return false;
  switch (kind) {
    case Kind::Fn1Name: return rel == other.rel;
    case Kind::Fn2Name: return op == other.op;
    case Kind::Constant: return label == other.label;
    default: return true;
  }
}

std::vector<std::string> actions_to_strings(const ActionSequence& seq) {
  std::vector<std::string> out;
  out.reserve(seq.size());
  for (const Production& p : seq) out.push_back(p.to_string());
  return out;
}

LogicalForm::LogicalForm(ExprPtr root) : root_(std::move(root)) {
  if (!root_) throw std::invalid_argument("LogicalForm requires a nonempty expression");
}

namespace {

void print_expr(const ExprPtr& e, std::string& out) {
  switch (e->kind) {
    case Expr::Kind::Constant:
      out += e->label;
      break;
    case Expr::Kind::Relation:
      out += '(';
      out += to_string(e->rel);
      out += ' ';
      print_expr(e->child, out);
      out += ')';
      break;
    case Expr::Kind::SetOp:
      out += '(';
      out += to_string(e->op);
      out += ' ';
      print_expr(e->left, out);
      out += ' ';
      print_expr(e->right, out);
      out += ')';
      break;
  }
}

void check_constants(const ExprPtr& e, const Vocabulary& vocab) {
  switch (e->kind) {
    case Expr::Kind::Constant:
      if (!vocab.contains(e->label)) {
        throw LangError("unknown constant '" + e->label + "'");
      }
      break;
    case Expr::Kind::Relation:
      check_constants(e->child, vocab);
      break;
    case Expr::Kind::SetOp:
      check_constants(e->left, vocab);
      check_constants(e->right, vocab);
      break;
  }
}

void emit_actions(const ExprPtr& e, ActionSequence& out) {
  switch (e->kind) {
    case Expr::Kind::Constant:
      out.push_back(Production::constant(e->label));
      break;
    case Expr::Kind::Relation:
      out.push_back(Production::apply_fn1());
      out.push_back(Production::fn1(e->rel));
      emit_actions(e->child, out);
      break;
    case Expr::Kind::SetOp:
      out.push_back(Production::apply_fn2());
      out.push_back(Production::fn2(e->op));
      emit_actions(e->left, out);
      emit_actions(e->right, out);
      break;
  }
}

int expr_action_count(const ExprPtr& e) {
  switch (e->kind) {
    case Expr::Kind::Constant: return 1;
    case Expr::Kind::Relation: return 2 + expr_action_count(e->child);
    case Expr::Kind::SetOp:
      return 2 + expr_action_count(e->left) + expr_action_count(e->right);
  }
  return 0;
}

int expr_depth(const ExprPtr& e) {
  switch (e->kind) {
    case Expr::Kind::Constant: return 1;
    case Expr::Kind::Relation: return 1 + expr_depth(e->child);
    case Expr::Kind::SetOp:
      return 1 + std::max(expr_depth(e->left), expr_depth(e->right));
  }
  return 0;
}

}  // namespace

std::string LogicalForm::print() const {
  std::string out;
  print_expr(root_, out);
  return out;
}

SemanticType LogicalForm::type_check(const Vocabulary& vocab) const {
  check_constants(root_, vocab);
  return SemanticType::TimeInterval;
}

ActionSequence LogicalForm::to_actions() const {
  ActionSequence out;
  out.push_back(Production::start());
  emit_actions(root_, out);
  return out;
}

int LogicalForm::action_length() const { return 1 + expr_action_count(root_); }

int LogicalForm::depth() const { return expr_depth(root_); }

bool operator<(const LogicalForm& a, const LogicalForm& b) {
  return a.print() < b.print();
}

// ---------------------------------------------------------------------------
// S-expression parsing

namespace {

struct Token {
  enum class Kind { LParen, RParen, Atom, End };
  Kind kind;
  std::string text;
  std::size_t offset;
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  Token next() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (pos_ >= text_.size()) return Token{Token::Kind::End, "", pos_};
    const std::size_t start = pos_;
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      return Token{Token::Kind::LParen, "(", start};
    }
    if (c == ')') {
      ++pos_;
      return Token{Token::Kind::RParen, ")", start};
    }
    while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_])) &&
           text_[pos_] != '(' && text_[pos_] != ')') {
      ++pos_;
    }
    return Token{Token::Kind::Atom, std::string(text_.substr(start, pos_ - start)), start};
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
};

bool is_predicate_name(const std::string& name) {
  if (name == "union" || name == "intersection") return true;
  for (int i = 0; i < kRelationCount; ++i) {
    if (to_string(static_cast<AllenRelation>(i)) == name) return true;
  }
  return false;
}

class SexprParser {
 public:
  explicit SexprParser(std::string_view text) : lexer_(text) { advance(); }

  LogicalForm parse() {
    ExprPtr root = parse_expr();
    if (current_.kind != Token::Kind::End) {
      throw LangError("trailing input after expression", current_.offset);
    }
    return LogicalForm(std::move(root));
  }

 private:
  void advance() { current_ = lexer_.next(); }

  ExprPtr parse_expr() {
    if (current_.kind == Token::Kind::Atom) {
      std::string name = current_.text;
      if (is_predicate_name(name)) {
        throw LangError("predicate name '" + name + "' cannot be used as a constant",
                        current_.offset);
      }
      advance();
      return Expr::constant(std::move(name));
    }
    if (current_.kind != Token::Kind::LParen) {
      throw LangError(current_.kind == Token::Kind::End ? "unexpected end of input"
                                                        : "unexpected ')'",
                      current_.offset);
    }
    const std::size_t open_offset = current_.offset;
    advance();
    if (current_.kind != Token::Kind::Atom) {
      throw LangError("expected a predicate name after '('", current_.offset);
    }
    const std::string head = current_.text;
    const std::size_t head_offset = current_.offset;
    if (!is_predicate_name(head)) {
      throw LangError("unknown predicate '" + head + "'", head_offset);
    }
    advance();

    std::vector<ExprPtr> args;
    while (current_.kind != Token::Kind::RParen) {
      if (current_.kind == Token::Kind::End) {
        throw LangError("unbalanced parentheses: '(' never closed", open_offset);
      }
      args.push_back(parse_expr());
    }
    advance();  // consume ')'

    if (head == "union" || head == "intersection") {
      if (args.size() != 2) {
        throw LangError("'" + head + "' takes exactly 2 arguments, got " +
                            std::to_string(args.size()),
                        head_offset);
      }
      return Expr::set_op(head == "union" ? SetOp::Union : SetOp::Intersection,
                          std::move(args[0]), std::move(args[1]));
    }
    if (args.size() != 1) {
      throw LangError("'" + head + "' takes exactly 1 argument, got " +
                          std::to_string(args.size()),
                      head_offset);
    }
    return Expr::relation(relation_from_string(head), std::move(args[0]));
  }

  Lexer lexer_;
  Token current_;
};

}  // namespace

LogicalForm LogicalForm::parse(std::string_view text) {
  return SexprParser(text).parse();
}

// ---------------------------------------------------------------------------
// Action replay

namespace {

class ActionReplayer {
 public:
  explicit ActionReplayer(const ActionSequence& seq) : seq_(seq) {}

  LogicalForm replay() {
    expect_kind(Production::Kind::StartToInterval, Symbol::Start);
    ++pos_;
    ExprPtr root = replay_interval();
    if (pos_ != seq_.size()) {
      throw LangError("trailing productions after the derivation completed (at action " +
                      std::to_string(pos_) + ")");
    }
    return LogicalForm(std::move(root));
  }

 private:
  const Production& current(Symbol expected) const {
    if (pos_ >= seq_.size()) {
      throw LangError("action sequence ended with dangling nonterminal " +
                      std::string(to_string(expected)));
    }
    return seq_[pos_];
  }

  void expect_kind(Production::Kind kind, Symbol expected) {
    const Production& p = current(expected);
    if (p.kind != kind) {
      throw LangError("inapplicable production '" + p.to_string() + "' at action " +
                      std::to_string(pos_) + "; frontier expects " +
                      std::string(to_string(expected)));
    }
  }

  ExprPtr replay_interval() {
    const Production& p = current(Symbol::TimeInterval);
    switch (p.kind) {
      case Production::Kind::Constant: {
        ++pos_;
        return Expr::constant(p.label);
      }
      case Production::Kind::ApplyFn1: {
        ++pos_;
        expect_kind(Production::Kind::Fn1Name, Symbol::Fn1);
        const AllenRelation rel = seq_[pos_].rel;
        ++pos_;
        return Expr::relation(rel, replay_interval());
      }
      case Production::Kind::ApplyFn2: {
        ++pos_;
        expect_kind(Production::Kind::Fn2Name, Symbol::Fn2);
        const SetOp op = seq_[pos_].op;
        ++pos_;
        ExprPtr left = replay_interval();
        ExprPtr right = replay_interval();
        return Expr::set_op(op, std::move(left), std::move(right));
      }
      default:
        throw LangError("inapplicable production '" + p.to_string() + "' at action " +
                        std::to_string(pos_) + "; frontier expects TimeInterval");
    }
  }

  const ActionSequence& seq_;
  std::size_t pos_ = 0;
};

}  // namespace

LogicalForm LogicalForm::from_actions(const ActionSequence& seq) {
  return ActionReplayer(seq).replay();
}

std::vector<AllenRelation> relation_inventory(const GrammarOptions& opts) {
  std::vector<AllenRelation> out;
  for (int i = 0; i < kRelationCount; ++i) {
    const auto r = static_cast<AllenRelation>(i);
    if (!opts.include_equals && r == AllenRelation::Equals) continue;
    out.push_back(r);
  }
  return out;
}

std::vector<Production> productions_for(Symbol nonterminal, const Vocabulary& vocab,
                                        const GrammarOptions& opts) {
  std::vector<Production> out;
  switch (nonterminal) {
    case Symbol::Start:
      out.push_back(Production::start());
      break;
    case Symbol::TimeInterval:
      out.push_back(Production::apply_fn1());
      out.push_back(Production::apply_fn2());
      for (const Vocabulary::Entry& e : vocab.entries()) {
        out.push_back(Production::constant(e.label));
      }
      break;
    case Symbol::Fn1:
      for (AllenRelation r : relation_inventory(opts)) out.push_back(Production::fn1(r));
      break;
    case Symbol::Fn2:
      out.push_back(Production::fn2(SetOp::Union));
      out.push_back(Production::fn2(SetOp::Intersection));
      break;
  }
  return out;
}

}  // namespace tempra
