#include "dofib/parse.hpp"

#include <cctype>
#include <string>

#include "dofib/errors.hpp"

namespace dofib {

namespace {

class Parser {
 public:
  Parser(std::string_view text, const RingPtr& ring) : s_(text), ring_(ring) {}

  RatFunc run() {
    RatFunc r = sum();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return r;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg + " at offset " + std::to_string(pos_) + " in \"" + std::string(s_) + "\"");
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  RatFunc sum() {
    skip();
    bool negate = false;
    if (eat('-')) {
      negate = true;
    } else {
      eat('+');
    }
    RatFunc acc = product();
    if (negate) acc = -acc;
    while (true) {
      if (eat('+')) {
        acc += product();
      } else if (eat('-')) {
        acc -= product();
      } else {
        return acc;
      }
    }
  }

  RatFunc product() {
    RatFunc acc = power();
    while (true) {
      if (eat('*')) {
        acc *= power();
      } else if (eat('/')) {
        RatFunc d = power();
        if (d.is_zero()) fail("division by zero");
        acc /= d;
      } else {
        return acc;
      }
    }
  }

  RatFunc power() {
    RatFunc base = atom();
    if (!eat('^')) return base;
    skip();
    bool neg = eat('-');
    skip();
    const std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("expected integer exponent");
    const long e = std::stol(std::string(s_.substr(start, pos_ - start)));
    if (neg && base.is_zero()) fail("negative power of zero");
    return base.pow(static_cast<int>(neg ? -e : e));
  }

  RatFunc atom() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      RatFunc r = sum();
      if (!eat(')')) fail("expected ')'");
      return r;
    }
    if (c == '-' || c == '+') {
      ++pos_;
      RatFunc r = power();
      return c == '-' ? -r : r;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      return RatFunc(ring_, BigRat(BigInt(std::string(s_.substr(start, pos_ - start)))));
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      while (pos_ < s_.size() &&
             (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) {
        ++pos_;
      }
      const std::string_view name = s_.substr(start, pos_ - start);
      if (!ring_->index_of(name)) {
        pos_ = start;
        fail("unknown symbol '" + std::string(name) + "'");
      }
      return RatFunc(Poly::variable(ring_, name));
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  std::string_view s_;
  RingPtr ring_;
  std::size_t pos_ = 0;
};

}  // namespace

RatFunc parse_ratfunc(std::string_view text, const RingPtr& ring) { return Parser(text, ring).run(); }

Poly parse_poly(std::string_view text, const RingPtr& ring) {
  RatFunc r = parse_ratfunc(text, ring);
  if (!r.is_polynomial()) throw ParseError("expected a polynomial: \"" + std::string(text) + "\"");
  return r.num() * (1 / r.den().constant_value());
}

BigRat parse_rational(std::string_view text) {
  RatFunc r = parse_ratfunc(text, make_ring({}));
  return r.constant_value();
}

}  // namespace dofib
