#include "bell/ncpoly.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cctype>
#include <cstdint>
#include <numeric>

namespace bell {

NCPolynomial NCPolynomial::constant(int n, GaussianRational c) {
  NCPolynomial p;
  p.n_parties = n;
  if (!c.is_zero()) {
    NCTerm t;
    t.coeff = std::move(c);
    t.word.assign(n, {});
    p.terms.push_back(std::move(t));
  }
  return p;
}

namespace {

// Product of two quantum generators at one site: G*G = 1 and
// G_a G_b = +-i G_c with + for the cyclic order (0,1,2).
// Returns {quadrant of i, symbol} with symbol = 0xff for the identity.
std::pair<int, std::uint8_t> pauli_product(std::uint8_t a, std::uint8_t b) {
  if (a == b) return {0, 0xff};
  const std::uint8_t c = static_cast<std::uint8_t>(3 - a - b);
  const bool cyclic = (b == (a + 1) % 3);
  return {cyclic ? 1 : 3, c};
}

NCTerm reduce_term(const NCTerm& in, RewriteMode mode) {
  NCTerm out;
  out.coeff = in.coeff;
  out.word.resize(in.word.size());
  for (std::size_t site = 0; site < in.word.size(); ++site) {
    const auto& w = in.word[site];
    if (mode == RewriteMode::Classical) {
      int count[3] = {0, 0, 0};
      for (std::uint8_t g : w) ++count[g];
      for (std::uint8_t g = 0; g < 3; ++g)
        if (count[g] & 1) out.word[site].push_back(g);
    } else {
      int quad = 0;
      std::uint8_t acc = 0xff;
      for (std::uint8_t g : w) {
        if (acc == 0xff) {
          acc = g;
        } else {
          auto [q, sym] = pauli_product(acc, g);
          quad += q;
          acc = sym;
        }
      }
      if (acc != 0xff) out.word[site].push_back(acc);
      out.coeff = out.coeff.rotated(quad);
    }
  }
  return out;
}

void sort_merge(NCPolynomial& p) {
  std::sort(p.terms.begin(), p.terms.end(),
            [](const NCTerm& a, const NCTerm& b) { return a.word < b.word; });
  std::vector<NCTerm> merged;
  for (NCTerm& t : p.terms) {
    if (!merged.empty() && merged.back().word == t.word)
      merged.back().coeff = merged.back().coeff + t.coeff;
    else
      merged.push_back(std::move(t));
  }
  std::erase_if(merged, [](const NCTerm& t) { return t.coeff.is_zero(); });
  p.terms = std::move(merged);
}

void check_same_arity(const NCPolynomial& p, const NCPolynomial& q) {
  if (p.n_parties != q.n_parties)
    throw invalid_input_error("ncpoly: party count mismatch");
}

}  // namespace

NCPolynomial canonicalize(const NCPolynomial& p, RewriteMode mode) {
  NCPolynomial out;
  out.n_parties = p.n_parties;
  out.terms.reserve(p.terms.size());
  for (const NCTerm& t : p.terms) {
    if (static_cast<int>(t.word.size()) != p.n_parties)
      throw invalid_input_error("ncpoly: term arity mismatch");
    out.terms.push_back(reduce_term(t, mode));
  }
  sort_merge(out);
  return out;
}

NCPolynomial multiply(const NCPolynomial& p, const NCPolynomial& q, RewriteMode mode) {
  check_same_arity(p, q);
  NCPolynomial prod;
  prod.n_parties = p.n_parties;
  prod.terms.reserve(p.terms.size() * q.terms.size());
  for (const NCTerm& a : p.terms) {
    for (const NCTerm& b : q.terms) {
      NCTerm t;
      t.coeff = a.coeff * b.coeff;
      t.word.resize(p.n_parties);
      for (int s = 0; s < p.n_parties; ++s) {
        t.word[s] = a.word[s];
        t.word[s].insert(t.word[s].end(), b.word[s].begin(), b.word[s].end());
      }
      prod.terms.push_back(std::move(t));
    }
  }
  return canonicalize(prod, mode);
}

NCPolynomial mk_polynomial(int n) {
  MKCoefficients c = mk_coefficients(n);
  NCPolynomial p;
  p.n_parties = n;
  for (std::uint32_t k = 0; k < c.coeff.size(); ++k) {
    if (c.coeff[k].is_zero()) continue;
    NCTerm t;
    t.coeff = GaussianRational(c.coeff[k]);
    t.word.resize(n);
    for (int i = 0; i < n; ++i)
      t.word[i].push_back(MKCoefficients::setting_of(k, i, n) == 0 ? kG0 : kG1);
    p.terms.push_back(std::move(t));
  }
  sort_merge(p);
  return p;
}

namespace {

std::vector<std::pair<int, std::uint8_t>> distinct_generators(const NCPolynomial& p) {
  std::vector<std::pair<int, std::uint8_t>> gens;
  for (const NCTerm& t : p.terms) {
    for (std::size_t s = 0; s < t.word.size(); ++s) {
      if (t.word[s].size() > 1)
        throw invalid_input_error("classical_max: per-site word length must be <= 1");
      for (std::uint8_t g : t.word[s]) gens.emplace_back(static_cast<int>(s), g);
    }
  }
  std::sort(gens.begin(), gens.end());
  gens.erase(std::unique(gens.begin(), gens.end()), gens.end());
  return gens;
}

}  // namespace

Rational classical_max(const NCPolynomial& p) {
  if (p.terms.empty()) return Rational(0);
  for (const NCTerm& t : p.terms)
    if (!t.coeff.is_real())
      throw invalid_input_error("classical_max: coefficients must be real");
  auto gens = distinct_generators(p);
  // The cap bounds the enumeration itself (up to 3 generators per site for
  // at most 5 sites), not the party count: sparse polynomials on more sites
  // stay enumerable as long as few generators actually occur.
  if (gens.size() > 15)
    throw capacity_error("classical_max: more than 15 distinct generators");

  // Integer arithmetic over the common denominator, like lhv_max.
  std::int64_t lcm = 1;
  for (const NCTerm& t : p.terms) {
    std::int64_t d = t.coeff.re.den();
    lcm = lcm / std::gcd(lcm, d) * d;
  }
  struct FlatTerm {
    std::int64_t num;
    std::uint32_t gen_mask;
  };
  std::vector<FlatTerm> flat;
  for (const NCTerm& t : p.terms) {
    FlatTerm f;
    f.num = t.coeff.re.num() * (lcm / t.coeff.re.den());
    f.gen_mask = 0;
    for (std::size_t s = 0; s < t.word.size(); ++s)
      for (std::uint8_t g : t.word[s]) {
        auto it = std::lower_bound(gens.begin(), gens.end(),
                                   std::make_pair(static_cast<int>(s), g));
        f.gen_mask |= 1u << (it - gens.begin());
      }
    flat.push_back(f);
  }
  std::int64_t best = INT64_MIN;
  const std::uint32_t total = 1u << gens.size();
  for (std::uint32_t assign = 0; assign < total; ++assign) {
    std::int64_t v = 0;
    for (const FlatTerm& f : flat) {
      const bool neg = std::popcount(f.gen_mask & assign) & 1;
      v += neg ? -f.num : f.num;
    }
    best = std::max(best, v);
  }
  return Rational(best, lcm);
}

std::pair<NCPolynomial, Rational> lhv_counterpart(const NCPolynomial& p_quantum) {
  for (const NCTerm& t : p_quantum.terms) {
    if (!t.coeff.is_real())
      throw invalid_input_error("lhv_counterpart: imaginary coefficient, input not Hermitian");
    for (const auto& w : t.word)
      if (w.size() > 1)
        throw invalid_input_error("lhv_counterpart: input is not in canonical quantum form");
  }
  // Structurally the same polynomial; each generator now stands for an
  // independent +-1 observable instead of an operator.
  NCPolynomial classical = p_quantum;
  Rational mx = classical_max(classical);
  return {std::move(classical), std::move(mx)};
}

ComplexMatrix to_matrix(const NCPolynomial& p, const MeasurementSettings& settings) {
  settings.validate();
  if (settings.n() != p.n_parties)
    throw invalid_input_error("to_matrix: party count mismatch");
  if (p.n_parties > max_qubits())
    throw capacity_error("to_matrix: party count exceeds max qubits");
  const int n = p.n_parties;
  std::vector<std::array<ComplexMatrix, 3>> site_ops(n);
  for (int i = 0; i < n; ++i) {
    site_ops[i][kG0] = settings.observable(i, 0);
    site_ops[i][kG1] = settings.observable(i, 1);
    site_ops[i][kG2] = settings.commutator_observable(i);
  }
  const std::size_t dim = std::size_t{1} << n;
  ComplexMatrix acc(dim);
  for (const NCTerm& t : p.terms) {
    ComplexMatrix prod = ComplexMatrix::identity(1);
    prod.at(0, 0) = 1.0;
    for (int i = 0; i < n; ++i) {
      ComplexMatrix site = ComplexMatrix::identity(2);
      for (std::uint8_t g : t.word[i]) site = matmul(site, site_ops[i][g]);
      prod = kron(prod, site);
    }
    const cplx c = t.coeff.to_complex();
    for (std::size_t i = 0; i < acc.a.size(); ++i) acc.a[i] += c * prod.a[i];
  }
  return acc;
}

// ---------------------------------------------------------------------------
// Parsing and serialization

namespace {

class Parser {
 public:
  Parser(const std::string& text, int n_expected) : text_(text), n_expected_(n_expected) {}

  NCPolynomial run() {
    skip_ws();
    if (eof()) throw parse_error("empty polynomial", pos_);
    bool negate = consume_sign();
    parse_term(negate);
    skip_ws();
    while (!eof()) {
      char c = text_[pos_];
      if (c != '+' && c != '-') throw parse_error("expected '+' or '-'", pos_);
      ++pos_;
      skip_ws();
      parse_term(c == '-');
      skip_ws();
    }
    const int n = n_expected_ >= 0 ? n_expected_ : std::max(1, max_site_ + 1);
    NCPolynomial p;
    p.n_parties = n;
    for (RawTerm& t : terms_) {
      NCTerm out;
      out.coeff = t.coeff;
      out.word.resize(n);
      for (auto& [site, sym] : t.factors) out.word[site].push_back(sym);
      p.terms.push_back(std::move(out));
    }
    return p;
  }

 private:
  struct RawTerm {
    GaussianRational coeff;
    std::vector<std::pair<int, std::uint8_t>> factors;
  };

  bool eof() const { return pos_ >= text_.size(); }
  void skip_ws() {
    while (!eof() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool consume_sign() {
    bool neg = false;
    if (!eof() && (text_[pos_] == '+' || text_[pos_] == '-')) {
      neg = text_[pos_] == '-';
      ++pos_;
      skip_ws();
    }
    return neg;
  }

  std::int64_t parse_nat() {
    if (eof() || !std::isdigit(static_cast<unsigned char>(text_[pos_])))
      throw parse_error("expected a number", pos_);
    std::int64_t v = 0;
    while (!eof() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      v = v * 10 + (text_[pos_] - '0');
      if (v > (std::int64_t{1} << 62)) throw parse_error("number too large", pos_);
      ++pos_;
    }
    return v;
  }

  // coeff := i ['/' nat] | nat ['i'] ['/' nat] ['i']     (one 'i' at most)
  bool try_parse_coeff(GaussianRational& out) {
    if (eof()) return false;
    const char c = text_[pos_];
    bool imag = false;
    std::int64_t num = 1, den = 1;
    if (c == 'i') {
      imag = true;
      ++pos_;
      if (!eof() && text_[pos_] == '/') {
        ++pos_;
        den = parse_nat();
      }
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      num = parse_nat();
      if (!eof() && text_[pos_] == 'i') {
        imag = true;
        ++pos_;
      }
      if (!eof() && text_[pos_] == '/') {
        ++pos_;
        den = parse_nat();
      }
      if (!imag && !eof() && text_[pos_] == 'i') {
        imag = true;
        ++pos_;
      }
    } else {
      return false;
    }
    if (den == 0) throw parse_error("zero denominator", pos_);
    Rational r(num, den);
    out = imag ? GaussianRational(Rational(0), r) : GaussianRational(r);
    return true;
  }

  void parse_term(bool negate) {
    GaussianRational coeff{Rational(1)};
    const bool has_coeff = try_parse_coeff(coeff);
    skip_ws();
    if (has_coeff && !eof() && text_[pos_] == '*') {
      ++pos_;
      skip_ws();
    }
    RawTerm term;
    term.coeff = negate ? -coeff : coeff;
    bool has_factor = false;
    while (!eof()) {
      const char c = text_[pos_];
      if (c >= 'A' && c <= 'Z') {
        const std::size_t at = pos_;
        const int site = c - 'A';
        if (n_expected_ >= 0 && site >= n_expected_)
          throw parse_error("site exceeds configured party count", at);
        ++pos_;
        int primes = 0;
        while (!eof() && text_[pos_] == '\'') {
          ++primes;
          ++pos_;
          if (primes > 2) throw parse_error("too many prime marks", pos_ - 1);
        }
        term.factors.emplace_back(site, static_cast<std::uint8_t>(primes));
        max_site_ = std::max(max_site_, site);
        has_factor = true;
        skip_ws();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else {
        break;
      }
    }
    if (!has_coeff && !has_factor)
      throw parse_error("expected a coefficient or a factor", pos_);
    if (!eof() && !has_factor && (std::isdigit(static_cast<unsigned char>(text_[pos_])) ||
                                  text_[pos_] == 'i'))
      throw parse_error("unexpected second coefficient", pos_);
    terms_.push_back(std::move(term));
  }

  const std::string& text_;
  int n_expected_;
  std::size_t pos_ = 0;
  int max_site_ = -1;
  std::vector<RawTerm> terms_;
};

std::string render_magnitude(const Rational& mag, bool imag, bool has_factors) {
  std::string s;
  if (imag) {
    if (mag.num() != 1) s += std::to_string(mag.num());
    s += 'i';
    if (mag.den() != 1) s += "/" + std::to_string(mag.den());
  } else {
    if (mag.num() != 1 || mag.den() != 1 || !has_factors) s = mag.to_string();
  }
  return s;
}

std::string render_factors(const NCTerm& t) {
  std::string s;
  for (std::size_t site = 0; site < t.word.size(); ++site) {
    for (std::uint8_t g : t.word[site]) {
      if (!s.empty()) s += ' ';
      s += static_cast<char>('A' + site);
      s.append(g, '\'');
    }
  }
  return s;
}

}  // namespace

NCPolynomial parse_polynomial(const std::string& text, int n_parties) {
  return Parser(text, n_parties).run();
}

std::string serialize(const NCPolynomial& p) {
  if (p.terms.empty()) return "0";
  std::string out;
  bool first = true;
  auto emit = [&](const Rational& value, bool imag, const NCTerm& t) {
    if (value.is_zero()) return;
    const bool neg = value < Rational(0);
    const std::string mag = render_magnitude(value.abs(), imag, !render_factors(t).empty());
    const std::string factors = render_factors(t);
    if (first) {
      if (neg) out += '-';
      first = false;
    } else {
      out += neg ? " - " : " + ";
    }
    out += mag;
    if (!mag.empty() && !factors.empty()) out += ' ';
    out += factors;
  };
  for (const NCTerm& t : p.terms) {
    // A coefficient with both parts renders as two textual terms over the
    // same word; the grammar has no compound literal and re-canonicalizing
    // the parse merges them back.
    emit(t.coeff.re, false, t);
    emit(t.coeff.im, true, t);
  }
  return out;
}

}  // namespace bell
