#include "nonrecip/fock.hpp"

#include <cctype>
#include <cstdlib>

namespace nonrecip {

namespace {

// Values are either scalars or operators until multiplied together.
struct Value {
  bool is_scalar = true;
  cplx scalar{1.0, 0.0};
  FockOperator op;
};

class Parser {
 public:
  Parser(const FockSpace& space, const std::string& text) : space_(space), text_(text) {}

  FockOperator parse() {
    Value v = expr();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    if (v.is_scalar) return v.scalar * identity_operator(space_);
    return v.op.relabeled(text_);
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorKind::InvalidConfig,
                "operator expression '" + text_ + "' at position " + std::to_string(pos_) + ": " + what);
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(const std::string& tok) {
    skip_ws();
    if (text_.compare(pos_, tok.size(), tok) == 0) {
      pos_ += tok.size();
      return true;
    }
    return false;
  }

  Value add(const Value& a, const Value& b, double sign) {
    if (a.is_scalar && b.is_scalar) return {true, a.scalar + sign * b.scalar, {}};
    FockOperator x = a.is_scalar ? a.scalar * identity_operator(space_) : a.op;
    FockOperator y = b.is_scalar ? b.scalar * identity_operator(space_) : b.op;
    return {false, 1.0, sign > 0 ? x + y : x - y};
  }

  Value mul(const Value& a, const Value& b) {
    if (a.is_scalar && b.is_scalar) return {true, a.scalar * b.scalar, {}};
    if (a.is_scalar) return {false, 1.0, a.scalar * b.op};
    if (b.is_scalar) return {false, 1.0, b.scalar * a.op};
    return {false, 1.0, a.op * b.op};
  }

  Value adjoint(const Value& v) {
    if (v.is_scalar) return {true, std::conj(v.scalar), {}};
    return {false, 1.0, v.op.adjoint()};
  }

  Value expr() {
    Value v = term();
    for (;;) {
      if (accept("+"))
        v = add(v, term(), 1.0);
      else if (accept("-"))
        v = add(v, term(), -1.0);
      else
        return v;
    }
  }

  Value term() {
    Value v = unary();
    while (accept("*")) v = mul(v, unary());
    return v;
  }

  Value unary() {
    if (accept("-")) {
      Value v = unary();
      return mul({true, -1.0, {}}, v);
    }
    if (accept("+")) return unary();
    Value v = primary();
    while (accept("^dag") || accept("'")) v = adjoint(v);
    return v;
  }

  int mode_index() {
    skip_ws();
    accept("_");
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) fail("expected a mode index");
    int m = std::stoi(text_.substr(start, pos_ - start));
    if (m < 1 || m > space_.num_modes()) fail("mode index " + std::to_string(m) + " out of range");
    return m;
  }

  Value primary() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of expression");
    if (accept("(")) {
      Value v = expr();
      if (!accept(")")) fail("missing ')'");
      return v;
    }
    if (accept("adjoint(") || accept("dag(")) {
      Value v = expr();
      if (!accept(")")) fail("missing ')'");
      return adjoint(v);
    }
    char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const char* begin = text_.c_str() + pos_;
      char* end = nullptr;
      double x = std::strtod(begin, &end);
      pos_ += static_cast<std::size_t>(end - begin);
      // trailing i makes an imaginary literal, e.g. 0.5i
      if (pos_ < text_.size() && text_[pos_] == 'i' &&
          (pos_ + 1 == text_.size() || !std::isalnum(static_cast<unsigned char>(text_[pos_ + 1])))) {
        ++pos_;
        return {true, cplx(0.0, x), {}};
      }
      return {true, x, {}};
    }
    if (accept("id")) return {false, 1.0, identity_operator(space_)};
    if (accept("adag")) return {false, 1.0, mode_creation(space_, mode_index())};
    if (accept("a")) return {false, 1.0, mode_annihilation(space_, mode_index())};
    if (accept("n")) return {false, 1.0, number_operator(space_, mode_index())};
    if (accept("i")) return {true, I, {}};
    fail("unknown token");
  }

  const FockSpace& space_;
  std::string text_;
  std::size_t pos_ = 0;
};

}  // namespace

FockOperator parse_operator(const FockSpace& space, const std::string& expr) { return Parser(space, expr).parse(); }

}  // namespace nonrecip
