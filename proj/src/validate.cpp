#include <cmath>
#include <sstream>

#include "sketchlr/approx.hpp"
#include "sketchlr/harness.hpp"

namespace sketchlr {

namespace {

using CMatrix = Matrix<Complex>;

template <typename S>
Matrix<S> dense_pinv(const Matrix<S>& m) {
  const SvdResult<S> dec = svd(m);
  const double cutoff = 1e-12 * (dec.sigma.size() > 0 ? dec.sigma(0) : 0.0);
  RealVector inv = RealVector::Zero(dec.sigma.size());
  for (Index i = 0; i < dec.sigma.size(); ++i) {
    if (dec.sigma(i) > cutoff) inv(i) = 1.0 / dec.sigma(i);
  }
  return dec.v * inv.asDiagonal() * dec.u.adjoint();
}

template <typename S>
double pinv_sq_norm(const Matrix<S>& m) {
  const SvdResult<S> dec = svd(m);
  double acc = 0.0;
  for (Index i = 0; i < dec.sigma.size(); ++i) {
    if (dec.sigma(i) > 0.0) acc += 1.0 / (dec.sigma(i) * dec.sigma(i));
  }
  return acc;
}

struct Checker {
  std::vector<CheckResult> results;
  std::uint64_t seed;

  void add(const std::string& name, bool pass, const std::string& detail) {
    results.push_back({name, pass, detail});
  }

  RngStream stream(std::uint64_t tag) const { return RngStream(seed, tag); }
};

std::string num(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

template <typename S>
void check_gaussian_pinv(Checker& c, std::uint64_t tag) {
  constexpr Field f = field_of<S>();
  const FieldConstants fc = field_constants(f);
  const long s = 4, t = 10;
  const double target = f_factor(s, t, f) / fc.beta;
  RngStream stream = c.stream(tag);
  const int draws = 2000;
  double acc = 0.0;
  for (int i = 0; i < draws; ++i) {
    acc += pinv_sq_norm(gaussian_matrix<S>(stream, t, s));
  }
  const double mean = acc / draws;
  const bool pass = std::abs(mean - target) <= 0.05 * target;
  c.add(std::string("gaussian_pinv_expectation_") + (f == Field::real ? "real" : "complex"),
        pass, "mean " + num(mean) + " vs target " + num(target) + " +-5%");
}

template <typename S>
void check_gaussian_product(Checker& c, std::uint64_t tag) {
  constexpr Field f = field_of<S>();
  const FieldConstants fc = field_constants(f);
  RngStream stream = c.stream(tag);
  const Matrix<S> b = gaussian_matrix<S>(stream, 3, 5);
  const Matrix<S> cc = gaussian_matrix<S>(stream, 4, 6);
  const double target = fc.beta * b.squaredNorm() * cc.squaredNorm();
  const int draws = 2000;
  double acc = 0.0;
  for (int i = 0; i < draws; ++i) {
    const Matrix<S> g = gaussian_matrix<S>(stream, 5, 4);
    acc += (b * g * cc).squaredNorm();
  }
  const double mean = acc / draws;
  const bool pass = std::abs(mean - target) <= 0.05 * target;
  c.add(std::string("gaussian_product_law_") + (f == Field::real ? "real" : "complex"),
        pass, "mean " + num(mean) + " vs target " + num(target) + " +-5%");
}

template <typename S>
void check_srft_unitary(Checker& c, std::uint64_t tag) {
  constexpr Field f = field_of<S>();
  RngStream stream = c.stream(tag);
  const Index n = 16;
  const Matrix<S> omega = srft_matrix<S>(stream, n, n);
  const double dev =
      (omega.adjoint() * omega - Matrix<S>::Identity(n, n)).norm();
  c.add(std::string("srft_unitary_full_") + (f == Field::real ? "real" : "complex"),
        dev <= 1e-12, "||Omega* Omega - I|| = " + num(dev));
}

void check_pythagorean_and_second_factor(Checker& c, std::uint64_t tag) {
  RngStream stream = c.stream(tag);
  bool pyth_ok = true, second_ok = true;
  double pyth_worst = 0.0, second_worst = 0.0;
  for (int inst = 0; inst < 20; ++inst) {
    const Index m = 40, n = 30, k = 8, l = 16;
    const CMatrix a = gaussian_matrix<Complex>(stream, m, n);
    SketchParams params;
    params.k = k;
    params.l = l;
    const SketchState<Complex> st(a, params, stream);
    const RankKApprox<Complex> qx = low_rank(st);
    const CMatrix& psi = detail::SketchAccess::psi(st);

    const double lhs = (a - qx.q * qx.x).squaredNorm();
    const CMatrix qqa = qx.q * (qx.q.adjoint() * a);
    const double rhs = (a - qqa).squaredNorm() + (qx.x - qx.q.adjoint() * a).squaredNorm();
    const double pyth_dev = std::abs(lhs - rhs) / std::max(1.0, lhs);
    pyth_worst = std::max(pyth_worst, pyth_dev);
    pyth_ok = pyth_ok && pyth_dev <= 1e-8;

    // Orthonormal complement of Q from the full factorization.
    Eigen::HouseholderQR<CMatrix> full(qx.q);
    const CMatrix p = (full.householderQ() * CMatrix::Identity(m, m)).rightCols(m - k);
    const CMatrix psi1 = psi * p;
    const CMatrix psi2 = psi * qx.q;
    const CMatrix predicted = dense_pinv(psi2) * psi1 * (p.adjoint() * a);
    const CMatrix actual = qx.x - qx.q.adjoint() * a;
    const double second_dev = (actual - predicted).norm() / std::max(1.0, actual.norm());
    second_worst = std::max(second_worst, second_dev);
    second_ok = second_ok && second_dev <= 1e-8;
  }
  c.add("pythagorean_identity", pyth_ok, "worst relative deviation " + num(pyth_worst));
  c.add("second_factor_identity", second_ok, "worst relative deviation " + num(second_worst));
}

void check_unbiasedness(Checker& c, std::uint64_t tag) {
  RngStream stream = c.stream(tag);
  const Index n = 50, k = 5, l = 12;
  const int draws = 500;
  const CMatrix a = gaussian_matrix<Complex>(stream, n, n);
  const CMatrix omega = gaussian_matrix<Complex>(stream, n, k);
  const CMatrix q = thin_qr(CMatrix(a * omega)).q;
  const CMatrix target = q.adjoint() * a;

  CMatrix sum = CMatrix::Zero(k, n);
  Matrix<Real> sum_abs_sq = Matrix<Real>::Zero(k, n);
  for (int i = 0; i < draws; ++i) {
    const CMatrix psi = gaussian_matrix<Complex>(stream, l, n);
    const QrThin<Complex> ut = thin_qr(CMatrix(psi * q));
    const CMatrix x = tri_pinv_apply(ut.r, CMatrix(ut.q.adjoint() * (psi * a)));
    sum += x;
    sum_abs_sq += x.cwiseAbs2();
  }
  const CMatrix mean = sum / static_cast<double>(draws);
  long within = 0;
  const long total = k * n;
  for (Index i = 0; i < k; ++i) {
    for (Index j = 0; j < n; ++j) {
      const double var =
          (sum_abs_sq(i, j) - std::norm(sum(i, j)) / draws) / (draws - 1);
      const double se = std::sqrt(std::max(var, 0.0) / draws);
      if (std::abs(mean(i, j) - target(i, j)) <= 5.0 * se) ++within;
    }
  }
  const double frac = static_cast<double>(within) / static_cast<double>(total);
  c.add("unbiasedness_fixed_omega", frac >= 0.99,
        num(100.0 * frac) + "% of entries within 5 standard errors");
}

void check_convex_projection(Checker& c, std::uint64_t tag) {
  MatrixSpec spec;
  spec.kind = MatrixKind::low_rank_med_noise;
  spec.n = 120;
  spec.big_r = 10;
  spec.seed = c.seed;
  const GeneratedMatrix herm = generate(spec);
  const GeneratedMatrix psd = psd_exemplar(spec);
  RngStream stream = c.stream(tag);
  bool sym_ok = true, psd_ok = true;
  for (int trial = 0; trial < 20; ++trial) {
    SketchParams params;
    params.k = 8;
    params.l = 16;
    {
      RngStream sub = stream.substream(2 * trial);
      const SketchState<Complex> st(herm.a, params, sub);
      const double plain = (herm.a - low_rank(st).dense()).norm();
      const double sym = (herm.a - low_rank_sym(st).dense()).norm();
      sym_ok = sym_ok && sym <= plain + 1e-12;
    }
    {
      RngStream sub = stream.substream(2 * trial + 1);
      const SketchState<Complex> st(psd.a, params, sub);
      const double sym = (psd.a - low_rank_sym(st).dense()).norm();
      const double pos = (psd.a - low_rank_psd(st).dense()).norm();
      psd_ok = psd_ok && pos <= sym + 1e-12;
    }
  }
  c.add("convex_projection_sym", sym_ok, "20/20 trials improved or tied");
  c.add("convex_projection_psd", psd_ok, "20/20 trials improved or tied");
}

void check_fixed_rank_triangle(Checker& c, std::uint64_t tag) {
  RngStream stream = c.stream(tag);
  bool ok = true;
  double worst = -1e300;
  for (int trial = 0; trial < 100; ++trial) {
    const Index m = 30, n = 20, k = 8, l = 16, r = 3;
    const CMatrix a = gaussian_matrix<Complex>(stream, m, n);
    const RealVector sigma = svd(a).sigma;
    SketchParams params;
    params.k = k;
    params.l = l;
    const SketchState<Complex> st(a, params, stream);
    const double base = (a - low_rank(st).dense()).norm();
    const double truncated = (a - fixed_rank(st, r).dense()).norm();
    const double bound = tail_energy(sigma, r + 1) + 2.0 * base + 1e-8;
    worst = std::max(worst, truncated - bound);
    ok = ok && truncated <= bound;
  }
  c.add("fixed_rank_triangle_bound", ok, "worst slack violation " + num(worst));
}

void check_truncation_commutes(Checker& c, std::uint64_t tag) {
  RngStream stream = c.stream(tag);
  bool ok = true;
  int tested = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const Index m = 25, n = 18, k = 6, l = 12, r = 3;
    const CMatrix a = gaussian_matrix<Complex>(stream, m, n);
    SketchParams params;
    params.k = k;
    params.l = l;
    const SketchState<Complex> st(a, params, stream);
    const RankKApprox<Complex> qx = low_rank(st);
    const SvdResult<Complex> xsvd = svd(qx.x);
    if (xsvd.sigma(r - 1) - xsvd.sigma(r) <= 1e-8 * xsvd.sigma(0)) {
      continue;  // tie: the best approximation is not unique, skip
    }
    ++tested;
    const CMatrix product = qx.q * qx.x;
    const SvdResult<Complex> psvd = svd(product);
    const CMatrix dense_trunc = psvd.u.leftCols(r) *
                                psvd.sigma.head(r).asDiagonal() *
                                psvd.v.leftCols(r).adjoint();
    const CMatrix factored = fixed_rank(st, r).dense();
    ok = ok && (dense_trunc - factored).norm() <= 1e-8 * std::max(1.0, product.norm());
  }
  c.add("truncation_commutes", ok && tested > 0,
        std::to_string(tested) + "/20 instances tested (ties skipped)");
}

void check_exact_recovery(Checker& c, std::uint64_t tag) {
  RngStream stream = c.stream(tag);
  const Index n = 40, r = 3, k = 6, l = 12, s = 12;
  bool ok = true;
  std::string failed;
  auto expect = [&](const std::string& who, const CMatrix& a, const CMatrix& approx) {
    if ((a - approx).norm() > 1e-8 * a.norm()) {
      ok = false;
      if (!failed.empty()) failed += ", ";
      failed += who;
    }
  };
  for (int trial = 0; trial < 5; ++trial) {
    const CMatrix left = gaussian_matrix<Complex>(stream, n, r);
    const CMatrix right = gaussian_matrix<Complex>(stream, n, r);
    const CMatrix a = left * right.adjoint();
    RealVector mixed(r);
    mixed << 2.0, -1.0, 0.5;
    const CMatrix herm = hermitian_part(CMatrix(left * mixed.asDiagonal() * left.adjoint()));
    const CMatrix psd = left * left.adjoint();

    SketchParams params;
    params.k = k;
    params.l = l;
    {
      const SketchState<Complex> st(a, params, stream);
      expect("simple_low_rank", a, simple_low_rank(st).dense());
      expect("low_rank", a, low_rank(st).dense());
      expect("fixed_rank", a, fixed_rank(st, r).dense());
      expect("woodruff", a, woodruff_fixed(st, r).dense());
      expect("cemmp", a, cemmp_fixed(st, r).dense());
    }
    {
      const SketchState<Complex> st(herm, params, stream);
      expect("low_rank_sym", herm, low_rank_sym(st).dense());
      expect("fixed_rank_sym", herm, fixed_rank_sym(st, r).dense());
    }
    {
      const SketchState<Complex> st(psd, params, stream);
      expect("low_rank_psd", psd, low_rank_psd(st).dense());
      expect("fixed_rank_psd", psd, fixed_rank_psd(st, r).dense());
    }
    {
      const ExtendedSketchState<Complex> est(a, r, k, s, stream);
      expect("bwz", a, bwz_fixed(est, r).dense());
    }
  }
  c.add("exact_recovery_all_methods", ok,
        ok ? "all reconstructions recover rank-3 inputs" : "failed: " + failed);
}

void check_mc_bounds(Checker& c, std::uint64_t tag) {
  MatrixSpec spec;
  spec.kind = MatrixKind::exp_decay_slow;
  spec.n = 100;
  spec.big_r = 10;
  spec.seed = c.seed;
  const GeneratedMatrix gen = generate(spec);
  const long k = 10, l = 20;
  const Field f = Field::cplx;
  const int alpha = field_constants(f).alpha;
  RngStream stream = c.stream(tag);

  const int draws = 200;
  double range_acc = 0.0;
  double recon_acc = 0.0;
  for (int i = 0; i < draws; ++i) {
    SketchParams params;
    params.k = k;
    params.l = l;
    const SketchState<Complex> st(gen.a, params, stream);
    const RankKApprox<Complex> qx = low_rank(st);
    range_acc += (gen.a - qx.q * (qx.q.adjoint() * gen.a)).squaredNorm();
    recon_acc += (gen.a - qx.q * qx.x).squaredNorm();
  }
  const double range_mean = range_acc / draws;
  const double recon_mean = recon_acc / draws;

  bool halko_ok = true;
  double halko_margin = -1e300;
  for (long rho = 1; rho < k - alpha; ++rho) {
    const double bound =
        (1.0 + f_factor(rho, k, f)) * std::pow(tail_energy(gen.sigma, rho + 1), 2);
    halko_margin = std::max(halko_margin, range_mean / bound);
    halko_ok = halko_ok && range_mean <= 1.1 * bound;
  }
  c.add("halko_range_bound_mc", halko_ok,
        "worst mean/bound ratio " + num(halko_margin) + " (limit 1.1)");

  const double theorem = frobenius_error_bound(gen.sigma, k, l, f);
  c.add("frobenius_error_bound_mc", recon_mean <= 1.1 * theorem,
        "mean " + num(recon_mean) + " vs bound " + num(theorem) + " (10% slack)");
}

}  // namespace

std::vector<CheckResult> validate_suite(std::uint64_t seed) {
  Checker c;
  c.seed = seed;
  check_gaussian_pinv<Real>(c, 101);
  check_gaussian_pinv<Complex>(c, 102);
  check_gaussian_product<Real>(c, 103);
  check_gaussian_product<Complex>(c, 104);
  check_srft_unitary<Real>(c, 105);
  check_srft_unitary<Complex>(c, 106);
  check_pythagorean_and_second_factor(c, 107);
  check_unbiasedness(c, 108);
  check_convex_projection(c, 109);
  check_fixed_rank_triangle(c, 110);
  check_truncation_commutes(c, 111);
  check_exact_recovery(c, 112);
  check_mc_bounds(c, 113);
  return c.results;
}

}  // namespace sketchlr
