// Copyright (C) 2026 lmgdpt contributors
// SPDX-License-Identifier: Apache-2.0
//

#include "lmgdpt/parity_echo.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <mpfr.h>

#include "lmgdpt/error.hpp"

namespace lmgdpt {

namespace {

constexpr int kMaxSweepsPerEigenvalue = 64;
constexpr int kInverseIterations = 4;

// Scalar with scoped lifetime.
class Mp {
 public:
  explicit Mp(mpfr_prec_t prec) { mpfr_init2(x_, prec); }
  ~Mp() { mpfr_clear(x_); }
  Mp(const Mp&) = delete;
  Mp& operator=(const Mp&) = delete;
  mpfr_ptr get() noexcept { return x_; }
  operator mpfr_ptr() noexcept { return x_; }
  mpfr_ptr operator->() noexcept { return x_; }

 private:
  mpfr_t x_;
};

// Fixed-size array; never resized after construction.
class MpArray {
 public:
  MpArray(std::size_t n, mpfr_prec_t prec) : data_(n) {
    for (auto& v : data_) mpfr_init2(&v, prec);
  }
  ~MpArray() {
    for (auto& v : data_) mpfr_clear(&v);
  }
  MpArray(const MpArray&) = delete;
  MpArray& operator=(const MpArray&) = delete;
  MpArray(MpArray&& other) noexcept : data_(std::move(other.data_)) {}

  std::size_t size() const noexcept { return data_.size(); }
  mpfr_ptr operator[](std::size_t i) noexcept { return &data_[i]; }
  mpfr_srcptr operator[](std::size_t i) const noexcept { return &data_[i]; }

 private:
  std::vector<__mpfr_struct> data_;
};

struct Tridiagonal {
  Tridiagonal(std::size_t n, mpfr_prec_t prec) : diag(n, prec), off(n, prec) {}
  MpArray diag;  // n entries
  MpArray off;   // off[i] couples i and i+1; off[n-1] = 0
};

// Parity sector of H = -h Jz - gamma/(2j) Jx^2 spanned by k = parity, parity+2, ...
Tridiagonal sector_matrix(const LmgParameters& p, int parity, mpfr_prec_t prec) {
  const int twice = p.j.twice();
  const std::size_t n = static_cast<std::size_t>((twice - parity) / 2 + 1);
  Tridiagonal t(n, prec);
  Mp j(prec), jj(prec), c(prec), m(prec), a(prec), b(prec), h(prec);
  mpfr_set_si(j, twice, MPFR_RNDN);
  mpfr_div_2ui(j, j, 1, MPFR_RNDN);
  mpfr_add_ui(jj, j, 1, MPFR_RNDN);
  mpfr_mul(jj, jj, j, MPFR_RNDN);
  mpfr_set_d(c, p.gamma_x, MPFR_RNDN);
  mpfr_div(c, c, j, MPFR_RNDN);
  mpfr_div_2ui(c, c, 1, MPFR_RNDN);  // gamma / 2j
  mpfr_set_d(h, p.h, MPFR_RNDN);

  // jp(x) = sqrt(j(j+1) - x(x+1)), written into `out`.
  auto ladder = [&](mpfr_ptr out, mpfr_srcptr x) {
    Mp tmp(prec);
    mpfr_add_ui(tmp, x, 1, MPFR_RNDN);
    mpfr_mul(tmp, tmp, x, MPFR_RNDN);
    mpfr_sub(out, jj, tmp, MPFR_RNDN);
    if (mpfr_sgn(out) < 0) mpfr_set_zero(out, 1);
    mpfr_sqrt(out, out, MPFR_RNDN);
  };

  for (std::size_t i = 0; i < n; ++i) {
    const long k = parity + 2 * static_cast<long>(i);
    mpfr_sub_si(m, j, k, MPFR_RNDN);
    // diag = -h m - c (jj - m^2) / 2
    mpfr_sqr(a, m, MPFR_RNDN);
    mpfr_sub(a, jj, a, MPFR_RNDN);
    mpfr_mul(a, a, c, MPFR_RNDN);
    mpfr_div_2ui(a, a, 1, MPFR_RNDN);
    mpfr_mul(b, h, m, MPFR_RNDN);
    mpfr_add(a, a, b, MPFR_RNDN);
    mpfr_neg(t.diag[i], a, MPFR_RNDN);
    if (i + 1 < n) {
      // off = -c/4 jp(m-2) jp(m-1)
      Mp x(prec);
      mpfr_sub_ui(x, m, 2, MPFR_RNDN);
      ladder(a, x);
      mpfr_sub_ui(x, m, 1, MPFR_RNDN);
      ladder(b, x);
      mpfr_mul(a, a, b, MPFR_RNDN);
      mpfr_mul(a, a, c, MPFR_RNDN);
      mpfr_div_2ui(a, a, 2, MPFR_RNDN);
      mpfr_neg(t.off[i], a, MPFR_RNDN);
    } else {
      mpfr_set_zero(t.off[i], 1);
    }
  }
  return t;
}

// Implicit QL with Wilkinson-type shifts on a symmetric tridiagonal matrix.
// On exit `d` holds the eigenvalues (unsorted). If `y` is non-null, it is
// replaced by its coordinates in the eigenbasis.
void tridiagonal_ql(MpArray& d, MpArray& e, MpArray* y, mpfr_prec_t prec) {
  const std::size_t n = d.size();
  Mp g(prec), r(prec), s(prec), c(prec), p(prec), f(prec), b(prec), dd(prec), tmp(prec), tol(prec);
  for (std::size_t l = 0; l < n; ++l) {
    int iter = 0;
    std::size_t m;
    do {
      for (m = l; m + 1 < n; ++m) {
        mpfr_abs(dd, d[m], MPFR_RNDN);
        mpfr_abs(tmp, d[m + 1], MPFR_RNDN);
        mpfr_add(dd, dd, tmp, MPFR_RNDN);
        mpfr_mul_2si(tol, dd, -static_cast<long>(prec), MPFR_RNDN);
        mpfr_abs(tmp, e[m], MPFR_RNDN);
        if (mpfr_lessequal_p(tmp, tol)) break;
      }
      if (m == l) break;
      if (iter++ == kMaxSweepsPerEigenvalue) {
        mpfr_abs(tmp, e[l], MPFR_RNDN);
        std::ostringstream msg;
        msg << "extended-precision QL did not converge after " << kMaxSweepsPerEigenvalue << " sweeps";
        throw NumericalError(msg.str(), mpfr_get_d(tmp, MPFR_RNDN));
      }
      // g = (d[l+1] - d[l]) / (2 e[l]); r = hypot(g, 1)
      mpfr_sub(g, d[l + 1], d[l], MPFR_RNDN);
      mpfr_div(g, g, e[l], MPFR_RNDN);
      mpfr_div_2ui(g, g, 1, MPFR_RNDN);
      mpfr_set_ui(tmp, 1, MPFR_RNDN);
      mpfr_hypot(r, g, tmp, MPFR_RNDN);
      // g = d[m] - d[l] + e[l] / (g + sign(r, g))
      if (mpfr_sgn(g) >= 0) {
        mpfr_add(tmp, g, r, MPFR_RNDN);
      } else {
        mpfr_sub(tmp, g, r, MPFR_RNDN);
      }
      mpfr_div(tmp, e[l], tmp, MPFR_RNDN);
      mpfr_sub(g, d[m], d[l], MPFR_RNDN);
      mpfr_add(g, g, tmp, MPFR_RNDN);
      mpfr_set_ui(s, 1, MPFR_RNDN);
      mpfr_set_ui(c, 1, MPFR_RNDN);
      mpfr_set_zero(p, 1);
      bool deflated = false;
      for (std::size_t ii = m; ii-- > l;) {
        mpfr_mul(f, s, e[ii], MPFR_RNDN);
        mpfr_mul(b, c, e[ii], MPFR_RNDN);
        mpfr_hypot(r, f, g, MPFR_RNDN);
        mpfr_set(e[ii + 1], r, MPFR_RNDN);
        if (mpfr_zero_p(r)) {
          mpfr_sub(d[ii + 1], d[ii + 1], p, MPFR_RNDN);
          mpfr_set_zero(e[m], 1);
          deflated = true;
          break;
        }
        mpfr_div(s, f, r, MPFR_RNDN);
        mpfr_div(c, g, r, MPFR_RNDN);
        mpfr_sub(g, d[ii + 1], p, MPFR_RNDN);
        // r = (d[i] - g) s + 2 c b
        mpfr_sub(r, d[ii], g, MPFR_RNDN);
        mpfr_mul(r, r, s, MPFR_RNDN);
        mpfr_mul(tmp, c, b, MPFR_RNDN);
        mpfr_mul_2ui(tmp, tmp, 1, MPFR_RNDN);
        mpfr_add(r, r, tmp, MPFR_RNDN);
        mpfr_mul(p, s, r, MPFR_RNDN);
        mpfr_add(d[ii + 1], g, p, MPFR_RNDN);
        // g = c r - b
        mpfr_mul(g, c, r, MPFR_RNDN);
        mpfr_sub(g, g, b, MPFR_RNDN);
        if (y != nullptr) {
          MpArray& v = *y;
          mpfr_set(f, v[ii + 1], MPFR_RNDN);
          // v[i+1] = s v[i] + c f ; v[i] = c v[i] - s f
          mpfr_mul(tmp, s, v[ii], MPFR_RNDN);
          mpfr_fma(v[ii + 1], c, f, tmp, MPFR_RNDN);
          mpfr_mul(tmp, s, f, MPFR_RNDN);
          mpfr_fms(v[ii], c, v[ii], tmp, MPFR_RNDN);
        }
      }
      if (deflated) continue;
      mpfr_sub(d[l], d[l], p, MPFR_RNDN);
      mpfr_set(e[l], g, MPFR_RNDN);
      mpfr_set_zero(e[m], 1);
    } while (m != l);
  }
}

// Normalized lowest eigenvector of a tridiagonal sector by shifted inverse
// iteration (Thomas algorithm). The lowest eigenvalue comes from a QL pass.
MpArray lowest_eigenvector(const LmgParameters& p, int parity, mpfr_prec_t prec) {
  Tridiagonal t = sector_matrix(p, parity, prec);
  const std::size_t n = t.diag.size();
  MpArray vec(n, prec);
  if (n == 1) {
    mpfr_set_ui(vec[0], 1, MPFR_RNDN);
    return vec;
  }

  Tridiagonal work = sector_matrix(p, parity, prec);
  tridiagonal_ql(work.diag, work.off, nullptr, prec);
  Mp sigma(prec), scale(prec), tmp(prec), norm(prec);
  mpfr_set(sigma, work.diag[0], MPFR_RNDN);
  for (std::size_t i = 1; i < n; ++i) mpfr_min(sigma, sigma, work.diag[i], MPFR_RNDN);
  mpfr_abs(scale, sigma, MPFR_RNDN);
  mpfr_set_ui(tmp, 1, MPFR_RNDN);
  mpfr_max(scale, scale, tmp, MPFR_RNDN);
  mpfr_mul_2si(scale, scale, -static_cast<long>(prec / 3), MPFR_RNDN);
  mpfr_sub(sigma, sigma, scale, MPFR_RNDN);

  MpArray cprime(n, prec), rhs(n, prec);
  for (std::size_t i = 0; i < n; ++i) mpfr_set_ui(vec[i], 1, MPFR_RNDN);
  Mp den(prec);
  for (int it = 0; it < kInverseIterations; ++it) {
    for (std::size_t i = 0; i < n; ++i) mpfr_set(rhs[i], vec[i], MPFR_RNDN);
    // Forward sweep on (T - sigma) x = rhs.
    mpfr_sub(den, t.diag[0], sigma, MPFR_RNDN);
    mpfr_div(cprime[0], t.off[0], den, MPFR_RNDN);
    mpfr_div(rhs[0], rhs[0], den, MPFR_RNDN);
    for (std::size_t i = 1; i < n; ++i) {
      mpfr_sub(den, t.diag[i], sigma, MPFR_RNDN);
      mpfr_mul(tmp, t.off[i - 1], cprime[i - 1], MPFR_RNDN);
      mpfr_sub(den, den, tmp, MPFR_RNDN);
      mpfr_div(cprime[i], t.off[i], den, MPFR_RNDN);
      mpfr_mul(tmp, t.off[i - 1], rhs[i - 1], MPFR_RNDN);
      mpfr_sub(rhs[i], rhs[i], tmp, MPFR_RNDN);
      mpfr_div(rhs[i], rhs[i], den, MPFR_RNDN);
    }
    mpfr_set(vec[n - 1], rhs[n - 1], MPFR_RNDN);
    for (std::size_t i = n - 1; i-- > 0;) {
      mpfr_mul(tmp, cprime[i], vec[i + 1], MPFR_RNDN);
      mpfr_sub(vec[i], rhs[i], tmp, MPFR_RNDN);
    }
    mpfr_set_zero(norm, 1);
    for (std::size_t i = 0; i < n; ++i) mpfr_fma(norm, vec[i], vec[i], norm, MPFR_RNDN);
    mpfr_sqrt(norm, norm, MPFR_RNDN);
    if (mpfr_sgn(vec[0]) < 0) mpfr_neg(norm, norm, MPFR_RNDN);
    for (std::size_t i = 0; i < n; ++i) mpfr_div(vec[i], vec[i], norm, MPFR_RNDN);
  }
  return vec;
}

}  // namespace

struct ExtendedPrecisionEcho::Impl {
  struct Sector {
    MpArray energies;
    MpArray weights;
  };
  std::vector<Sector> sectors;  // [even, odd]
  Index dim;
};

ExtendedPrecisionEcho::ExtendedPrecisionEcho(const LmgParameters& initial, const LmgParameters& final_params,
                                             int bits)
    : impl_(std::make_unique<Impl>()), bits_(bits > 0 ? bits : kDefaultBits) {
  if (!(initial.j == final_params.j) || initial.gamma_x != final_params.gamma_x) {
    throw ValidationError("extended echo: initial and final parameters differ in j or gamma_x");
  }
  if (bits_ < 64 || bits_ > 1 << 16) throw ValidationError("extended echo: precision must lie in [64, 65536] bits");
  const mpfr_prec_t prec = bits_;
  impl_->dim = initial.j.dim();
  for (int parity = 0; parity < 2 && parity <= initial.j.twice(); ++parity) {
    MpArray y = lowest_eigenvector(initial, parity, prec);
    Tridiagonal t = sector_matrix(final_params, parity, prec);
    tridiagonal_ql(t.diag, t.off, &y, prec);
    for (std::size_t i = 0; i < y.size(); ++i) mpfr_sqr(y[i], y[i], MPFR_RNDN);
    impl_->sectors.push_back(Impl::Sector{std::move(t.diag), std::move(y)});
  }
}

ExtendedPrecisionEcho::~ExtendedPrecisionEcho() = default;

std::vector<double> ExtendedPrecisionEcho::sector_energies(int parity) const {
  if (parity < 0 || parity >= static_cast<int>(impl_->sectors.size())) {
    throw ValidationError("extended echo: no such parity sector");
  }
  const MpArray& e = impl_->sectors[parity].energies;
  std::vector<double> out(e.size());
  for (std::size_t i = 0; i < e.size(); ++i) out[i] = mpfr_get_d(e[i], MPFR_RNDN);
  std::sort(out.begin(), out.end());
  return out;
}

double ExtendedPrecisionEcho::log_floor(Index n_t) const {
  const double slack = std::log(1e3 * static_cast<double>(impl_->dim) * static_cast<double>(std::max<Index>(n_t, 1)));
  return 2.0 * (-static_cast<double>(bits_) * std::log(2.0) + slack);
}

std::vector<double> ExtendedPrecisionEcho::log_echo(ParityWeights weights, double t_max, Index n_t) const {
  if (!(weights.even >= 0.0) || !(weights.odd >= 0.0) || std::abs(weights.even + weights.odd - 1.0) > 1e-12) {
    throw ValidationError("extended echo: parity weights must be non-negative and sum to one");
  }
  if (!(t_max > 0.0) || n_t < 2) throw ValidationError("extended echo: need t_max > 0 and n_t >= 2");
  if (weights.odd > 0.0 && impl_->sectors.size() < 2) {
    throw ValidationError("extended echo: odd sector is empty");
  }
  const mpfr_prec_t prec = bits_;
  Mp dt(prec), phase(prec), tmp(prec), re(prec), im(prec), tot_re(prec), tot_im(prec), pw(prec);
  mpfr_set_d(dt, t_max, MPFR_RNDN);
  mpfr_div_ui(dt, dt, static_cast<unsigned long>(n_t - 1), MPFR_RNDN);

  struct Running {
    MpArray zr, zi, ur, ui;
    double weight;
  };
  std::vector<Running> run;
  const double pw_list[2] = {weights.even, weights.odd};
  for (std::size_t s = 0; s < impl_->sectors.size(); ++s) {
    if (pw_list[s] == 0.0) continue;
    const auto& sec = impl_->sectors[s];
    const std::size_t n = sec.energies.size();
    Running r{MpArray(n, prec), MpArray(n, prec), MpArray(n, prec), MpArray(n, prec), pw_list[s]};
    for (std::size_t i = 0; i < n; ++i) {
      mpfr_set(r.zr[i], sec.weights[i], MPFR_RNDN);
      mpfr_set_zero(r.zi[i], 1);
      // u = exp(-i E dt)
      mpfr_mul(phase, sec.energies[i], dt, MPFR_RNDN);
      mpfr_sin_cos(r.ui[i], r.ur[i], phase, MPFR_RNDN);
      mpfr_neg(r.ui[i], r.ui[i], MPFR_RNDN);
    }
    run.push_back(std::move(r));
  }

  std::vector<double> out(static_cast<std::size_t>(n_t));
  for (Index k = 0; k < n_t; ++k) {
    mpfr_set_zero(tot_re, 1);
    mpfr_set_zero(tot_im, 1);
    for (auto& r : run) {
      mpfr_set_zero(re, 1);
      mpfr_set_zero(im, 1);
      const std::size_t n = r.zr.size();
      for (std::size_t i = 0; i < n; ++i) {
        mpfr_add(re, re, r.zr[i], MPFR_RNDN);
        mpfr_add(im, im, r.zi[i], MPFR_RNDN);
      }
      mpfr_set_d(pw, r.weight, MPFR_RNDN);
      mpfr_fma(tot_re, re, pw, tot_re, MPFR_RNDN);
      mpfr_fma(tot_im, im, pw, tot_im, MPFR_RNDN);
      if (k + 1 == n_t) continue;
      for (std::size_t i = 0; i < n; ++i) {
        // z <- z u
        mpfr_mul(tmp, r.zi[i], r.ui[i], MPFR_RNDN);
        mpfr_fms(re, r.zr[i], r.ur[i], tmp, MPFR_RNDN);
        mpfr_mul(tmp, r.zr[i], r.ui[i], MPFR_RNDN);
        mpfr_fma(r.zi[i], r.zi[i], r.ur[i], tmp, MPFR_RNDN);
        mpfr_set(r.zr[i], re, MPFR_RNDN);
      }
    }
    mpfr_sqr(tot_re, tot_re, MPFR_RNDN);
    mpfr_fma(tot_re, tot_im, tot_im, tot_re, MPFR_RNDN);
    if (mpfr_zero_p(tot_re)) {
      out[static_cast<std::size_t>(k)] = -std::numeric_limits<double>::infinity();
    } else {
      mpfr_log(tot_re, tot_re, MPFR_RNDN);
      out[static_cast<std::size_t>(k)] = mpfr_get_d(tot_re, MPFR_RNDN);
    }
  }
  return out;
}

}  // namespace lmgdpt
