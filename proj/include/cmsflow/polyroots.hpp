#pragma once

// Dense real-polynomial utilities used by the symmetric-coordinate engine:
// evaluation, construction from roots, root extraction via balanced
// companion-matrix eigenvalues with Newton polish, and the resultant /
// discriminant through a Euclidean remainder sequence.
//
// Polynomials are stored as ascending coefficient vectors: p(z) = sum c[k] z^k.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <vector>

namespace cmsflow::poly {

using cdouble = std::complex<double>;

/// Horner evaluation.
template <class T, class X>
X horner(const std::vector<T>& c, X z) {
  X acc{};
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * z + X(*it);
  return acc;
}

/// Coefficients of the derivative.
inline std::vector<double> derivative(const std::vector<double>& c) {
  if (c.size() <= 1) return {0.0};
  std::vector<double> d(c.size() - 1);
  for (std::size_t k = 1; k < c.size(); ++k) d[k - 1] = static_cast<double>(k) * c[k];
  return d;
}

/// Monic polynomial with the given roots, by incremental convolution.
inline std::vector<double> from_roots(const std::vector<double>& roots) {
  std::vector<double> c{1.0};
  for (double r : roots) {
    c.push_back(0.0);
    for (std::size_t k = c.size() - 1; k >= 1; --k) c[k] = c[k - 1] - r * c[k];
    c[0] *= -r;
  }
  return c;
}

namespace detail {

// EISPACK-style balancing (scaling pass only); a is n x n row-major.
inline void balance(std::vector<double>& a, int n) {
  const double radix = 2.0, sq = radix * radix;
  bool done = false;
  while (!done) {
    done = true;
    for (int i = 0; i < n; ++i) {
      double r = 0.0, c = 0.0;
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        c += std::abs(a[j * n + i]);
        r += std::abs(a[i * n + j]);
      }
      if (c == 0.0 || r == 0.0) continue;
      double g = r / radix, f = 1.0, s = c + r;
      while (c < g) {
        f *= radix;
        c *= sq;
      }
      g = r * radix;
      while (c > g) {
        f /= radix;
        c /= sq;
      }
      if ((c + r) / f < 0.95 * s) {
        done = false;
        g = 1.0 / f;
        for (int j = 0; j < n; ++j) a[i * n + j] *= g;
        for (int j = 0; j < n; ++j) a[j * n + i] *= f;
      }
    }
  }
}

// Francis double-shift QR on an upper Hessenberg matrix (eigenvalues only).
// Classic hqr; destroys a. Throws on non-convergence.
inline void hqr(std::vector<double>& a, int n, std::vector<double>& wr,
                std::vector<double>& wi) {
  auto at = [&](int i, int j) -> double& { return a[i * n + j]; };
  const double eps = std::numeric_limits<double>::epsilon();
  wr.assign(n, 0.0);
  wi.assign(n, 0.0);
  double anorm = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = std::max(i - 1, 0); j < n; ++j) anorm += std::abs(at(i, j));
  int nn = n - 1;
  double t = 0.0;
  while (nn >= 0) {
    int its = 0;
    int l;
    do {
      for (l = nn; l >= 1; --l) {
        double s = std::abs(at(l - 1, l - 1)) + std::abs(at(l, l));
        if (s == 0.0) s = anorm;
        if (std::abs(at(l, l - 1)) <= eps * s) {
          at(l, l - 1) = 0.0;
          break;
        }
      }
      double x = at(nn, nn);
      if (l == nn) {
        wr[nn] = x + t;
        wi[nn] = 0.0;
        --nn;
      } else {
        double y = at(nn - 1, nn - 1);
        double w = at(nn, nn - 1) * at(nn - 1, nn);
        if (l == nn - 1) {
          double p = 0.5 * (y - x);
          double q = p * p + w;
          double z = std::sqrt(std::abs(q));
          x += t;
          if (q >= 0.0) {
            z = p + (p >= 0.0 ? z : -z);
            wr[nn - 1] = wr[nn] = x + z;
            if (z != 0.0) wr[nn] = x - w / z;
            wi[nn - 1] = wi[nn] = 0.0;
          } else {
            wr[nn - 1] = wr[nn] = x + p;
            wi[nn] = z;
            wi[nn - 1] = -z;
          }
          nn -= 2;
        } else {
          if (its == 60) throw std::runtime_error("hqr: too many QR iterations");
          if (its == 10 || its == 20 || its == 30 || its == 40 || its == 50) {
            t += x;
            for (int i = 0; i <= nn; ++i) at(i, i) -= x;
            double s = std::abs(at(nn, nn - 1)) + std::abs(at(nn - 1, nn - 2));
            y = x = 0.75 * s;
            w = -0.4375 * s * s;
          }
          ++its;
          int m;
          double p = 0.0, q = 0.0, r = 0.0;
          for (m = nn - 2; m >= l; --m) {
            double z = at(m, m);
            double rr = x - z;
            double ss = y - z;
            p = (rr * ss - w) / at(m + 1, m) + at(m, m + 1);
            q = at(m + 1, m + 1) - z - rr - ss;
            r = at(m + 2, m + 1);
            double scale = std::abs(p) + std::abs(q) + std::abs(r);
            p /= scale;
            q /= scale;
            r /= scale;
            if (m == l) break;
            double u = std::abs(at(m, m - 1)) * (std::abs(q) + std::abs(r));
            double v = std::abs(p) * (std::abs(at(m - 1, m - 1)) + std::abs(z) +
                                      std::abs(at(m + 1, m + 1)));
            if (u <= eps * v) break;
          }
          for (int i = m; i < nn - 1; ++i) {
            at(i + 2, i) = 0.0;
            if (i != m) at(i + 2, i - 1) = 0.0;
          }
          for (int k = m; k < nn; ++k) {
            if (k != m) {
              p = at(k, k - 1);
              q = at(k + 1, k - 1);
              r = (k + 1 != nn) ? at(k + 2, k - 1) : 0.0;
              x = std::abs(p) + std::abs(q) + std::abs(r);
              if (x != 0.0) {
                p /= x;
                q /= x;
                r /= x;
              }
            }
            double s = std::sqrt(p * p + q * q + r * r);
            if (p < 0.0) s = -s;
            if (s == 0.0) continue;
            if (k == m) {
              if (l != m) at(k, k - 1) = -at(k, k - 1);
            } else {
              at(k, k - 1) = -s * x;
            }
            p += s;
            x = p / s;
            double y2 = q / s;
            double z = r / s;
            q /= p;
            r /= p;
            for (int j = k; j <= nn; ++j) {
              double pp = at(k, j) + q * at(k + 1, j);
              if (k + 1 != nn) {
                pp += r * at(k + 2, j);
                at(k + 2, j) -= pp * z;
              }
              at(k + 1, j) -= pp * y2;
              at(k, j) -= pp * x;
            }
            int mmin = (nn < k + 3) ? nn : k + 3;
            for (int i = l; i <= mmin; ++i) {
              double pp = x * at(i, k) + y2 * at(i, k + 1);
              if (k + 1 != nn) {
                pp += z * at(i, k + 2);
                at(i, k + 2) -= pp * r;
              }
              at(i, k + 1) -= pp * q;
              at(i, k) -= pp;
            }
          }
        }
      }
    } while (l < nn - 1);
  }
}

}  // namespace detail

/// All complex roots of the polynomial with ascending coefficients c.
/// Strategy: deflate exact zero roots, rescale z -> s*w so the remaining
/// coefficients are O(1), run balanced companion-matrix QR, then polish each
/// root with up to two Newton steps on the original coefficients (a step is
/// kept only when it reduces |p|).
inline std::vector<cdouble> roots(std::vector<double> c) {
  while (c.size() > 1 && c.back() == 0.0) c.pop_back();
  if (c.size() <= 1) {
    if (c.empty() || c[0] != 0.0) return {};
    throw std::invalid_argument("roots: zero polynomial");
  }
  const std::vector<double> orig = c;
  std::vector<cdouble> out;
  // exact zero roots
  std::size_t shift = 0;
  while (shift + 1 < c.size() && c[shift] == 0.0) ++shift;
  for (std::size_t k = 0; k < shift; ++k) out.emplace_back(0.0, 0.0);
  if (shift) c.erase(c.begin(), c.begin() + shift);

  const int deg = static_cast<int>(c.size()) - 1;
  if (deg >= 1) {
    for (auto& v : c) v /= c.back();  // monic
    // geometric rescale: roots of c(s*w)/s^deg are O(1)
    double s = 0.0;
    for (int k = 1; k <= deg; ++k) {
      double ak = std::abs(c[deg - k]);
      if (ak > 0.0) s = std::max(s, std::pow(ak, 1.0 / k));
    }
    if (s <= 0.0 || !std::isfinite(s)) s = 1.0;
    std::vector<double> cs(c.size());
    double pw = 1.0;
    for (int k = deg; k >= 0; --k) {
      cs[k] = c[k] / pw;  // pw = s^(deg-k)
      pw *= s;
    }
    if (deg == 1) {
      out.emplace_back(-cs[0] * s, 0.0);
    } else {
      std::vector<double> a(static_cast<std::size_t>(deg) * deg, 0.0);
      for (int j = 0; j < deg; ++j) a[0 * deg + j] = -cs[deg - 1 - j];
      for (int i = 1; i < deg; ++i) a[i * deg + (i - 1)] = 1.0;
      detail::balance(a, deg);
      std::vector<double> wr, wi;
      detail::hqr(a, deg, wr, wi);
      for (int i = 0; i < deg; ++i) out.emplace_back(wr[i] * s, wi[i] * s);
    }
  }

  // Newton polish against the original polynomial.
  const std::vector<double> dorig = derivative(orig);
  for (auto& z : out) {
    for (int step = 0; step < 2; ++step) {
      cdouble p = horner(orig, z);
      cdouble dp = horner(dorig, z);
      if (std::abs(dp) == 0.0) break;
      cdouble zn = z - p / dp;
      if (std::abs(horner(orig, zn)) < std::abs(p))
        z = zn;
      else
        break;
    }
  }
  std::sort(out.begin(), out.end(), [](const cdouble& a, const cdouble& b) {
    if (a.real() != b.real()) return a.real() > b.real();
    return a.imag() > b.imag();
  });
  return out;
}

/// Resultant of two real polynomials via the Euclidean remainder sequence.
inline double resultant(std::vector<double> a, std::vector<double> b) {
  auto deg = [](const std::vector<double>& p) {
    int d = static_cast<int>(p.size()) - 1;
    while (d >= 0 && p[d] == 0.0) --d;
    return d;
  };
  int da = deg(a), db = deg(b);
  if (da < 0 || db < 0) return 0.0;
  a.resize(da + 1);
  b.resize(db + 1);
  double res = 1.0;
  if (da < db) {
    if ((da & 1) && (db & 1)) res = -res;
    std::swap(a, b);
    std::swap(da, db);
  }
  while (db > 0) {
    // remainder of a by b
    std::vector<double> r = a;
    for (int k = da; k >= db; --k) {
      double f = r[k] / b[db];
      if (f == 0.0) continue;
      for (int j = 0; j <= db; ++j) r[k - db + j] -= f * b[j];
      r[k] = 0.0;
    }
    int dr = db - 1;
    while (dr >= 0 && r[dr] == 0.0) --dr;
    if (dr < 0) return 0.0;  // common factor
    r.resize(dr + 1);
    if ((da & 1) && (db & 1)) res = -res;
    res *= std::pow(b[db], da - dr);
    a = std::move(b);
    da = db;
    b = std::move(r);
    db = dr;
  }
  return res * std::pow(b[0], da);
}

/// Discriminant of a monic polynomial: prod_{i<j} (r_i - r_j)^2.
inline double discriminant_monic(const std::vector<double>& c) {
  int d = static_cast<int>(c.size()) - 1;
  while (d >= 0 && c[d] == 0.0) --d;
  if (d <= 1) return 1.0;
  double r = resultant(c, derivative(c));
  long m = static_cast<long>(d) * (d - 1) / 2;
  return (m & 1) ? -r : r;
}

}  // namespace cmsflow::poly
