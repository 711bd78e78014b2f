#include "schottky/transfer.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>

#include "schottky/util.hpp"

namespace schottky {

BlockOperator assemble_transfer(const OperatorAssembler& assembler, Complex s,
                                const Representation& rep) {
  const auto& data = assembler.data();
  const int two_d = data.alphabet_size();
  const int basis = assembler.spec().basis_size();
  const int m = rep.dimension;
  const int scalar_dim = assembler.scalar_dim();
  if (static_cast<int>(rep.images.size()) != two_d)
    throw std::invalid_argument("representation must provide one image per letter");

  BlockOperator op;
  op.num_discs = two_d;
  op.basis_size = basis;
  op.sheet_count = m;
  op.matrix = MatrixXcd::Zero(scalar_dim * m, scalar_dim * m);
  for (int i = 0; i < two_d; ++i) {
    MatrixXcd a = assembler.letter_matrix(i, s);
    const int source = data.conj(i);
    for (int j = 0; j < two_d; ++j) {
      if (j == i) continue;
      for (int p = 0; p < basis; ++p) {
        int row = assembler.block_start(j) + p;
        for (int q = 0; q < basis; ++q) {
          int col = assembler.block_start(source) + q;
          Complex w = a(row, col);
          if (w != Complex(0.0, 0.0))
            op.matrix.block(row * m, col * m, m, m) += w * rep.images[i];
        }
      }
    }
  }
  return op;
}

Complex fredholm_det(const OperatorAssembler& assembler, Complex s, const Representation& rep) {
  return det_one_minus(assemble_transfer(assembler, s, rep).matrix).value;
}

Complex fredholm_logdet(const OperatorAssembler& assembler, Complex s,
                        const Representation& rep) {
  return det_one_minus(assemble_transfer(assembler, s, rep).matrix).log_value;
}

double operator_power_norm(const OperatorAssembler& assembler, Complex s,
                           const Representation& rep, int ell) {
  if (ell < 1) throw std::invalid_argument("power must be >= 1");
  MatrixXcd l = assemble_transfer(assembler, s, rep).matrix;
  MatrixXcd acc = l;
  for (int k = 1; k < ell; ++k) acc = acc * l;
  return spectral_norm(acc);
}

namespace {

class ContourTracker {
 public:
  ContourTracker(const std::function<Complex(Complex)>& f, const ScanOptions& opts)
      : f_(f), opts_(opts) {}

  void preload(Complex z, Complex v) { touch(v); cache_[key(z)] = v; }

  Complex eval(Complex z) {
    auto k = key(z);
    auto it = cache_.find(k);
    if (it != cache_.end()) return it->second;
    Complex v = f_(z);
    touch(v);
    cache_.emplace(k, v);
    return v;
  }

  /// Accumulated change of argument along the straight edge a -> b,
  /// bisecting while a single step turns by more than pi/2.
  double edge_argument(Complex a, Complex b) {
    return segment(a, eval(a), b, eval(b), 0);
  }

  bool hit_floor() const { return hit_floor_; }
  double min_abs() const { return min_abs_; }

 private:
  static std::pair<double, double> key(Complex z) { return {z.real(), z.imag()}; }

  void touch(Complex v) {
    double a = std::abs(v);
    min_abs_ = std::min(min_abs_, a);
    if (a < opts_.contour_floor) hit_floor_ = true;
  }

  double segment(Complex za, Complex fa, Complex zb, Complex fb, int depth) {
    double dphi = std::arg(fb / fa);
    if (std::abs(dphi) <= std::numbers::pi / 2.0 || depth >= opts_.max_edge_depth) return dphi;
    Complex zm = 0.5 * (za + zb);
    Complex fm = eval(zm);
    return segment(za, fa, zm, fm, depth + 1) + segment(zm, fm, zb, fb, depth + 1);
  }

  const std::function<Complex(Complex)>& f_;
  const ScanOptions& opts_;
  std::map<std::pair<double, double>, Complex> cache_;
  bool hit_floor_ = false;
  double min_abs_ = std::numeric_limits<double>::infinity();
};

Complex newton_refine(const std::function<Complex(Complex)>& f, Complex z0,
                      const ScanOptions& opts) {
  Complex z = z0;
  for (int iter = 0; iter < opts.newton_max_iter; ++iter) {
    Complex v = f(z);
    Complex d = (f(z + opts.newton_step) - f(z - opts.newton_step)) / (2.0 * opts.newton_step);
    if (std::abs(d) == 0.0) break;
    Complex step = v / d;
    z -= step;
    if (std::abs(step) < opts.newton_tol) break;
  }
  return z;
}

WindingScanResult scan_once(const std::function<Complex(Complex)>& f, const Rectangle& rect,
                            int nx, int ny, double shift_x, double shift_y,
                            const ScanOptions& opts, int threads, bool& floored) {
  const double hx = (rect.re_hi - rect.re_lo) / nx;
  const double hy = (rect.im_hi - rect.im_lo) / ny;
  auto point = [&](int ix, int iy) {
    return Complex(rect.re_lo + shift_x + ix * hx, rect.im_lo + shift_y + iy * hy);
  };
  WindingScanResult result;
  result.grid.resize((nx + 1) * (ny + 1));
  parallel_for_indexed(result.grid.size(), threads, [&](std::size_t k) {
    int ix = static_cast<int>(k % (nx + 1));
    int iy = static_cast<int>(k / (nx + 1));
    result.grid[k] = f(point(ix, iy));
  });

  ContourTracker tracker(f, opts);
  for (int iy = 0; iy <= ny; ++iy)
    for (int ix = 0; ix <= nx; ++ix) tracker.preload(point(ix, iy), result.grid[iy * (nx + 1) + ix]);

  for (int iy = 0; iy < ny && !tracker.hit_floor(); ++iy) {
    for (int ix = 0; ix < nx && !tracker.hit_floor(); ++ix) {
      Complex c00 = point(ix, iy), c10 = point(ix + 1, iy);
      Complex c11 = point(ix + 1, iy + 1), c01 = point(ix, iy + 1);
      double total = tracker.edge_argument(c00, c10) + tracker.edge_argument(c10, c11) +
                     tracker.edge_argument(c11, c01) + tracker.edge_argument(c01, c00);
      int w = static_cast<int>(std::lround(total / (2.0 * std::numbers::pi)));
      if (w != 0) {
        Complex z = newton_refine(f, 0.5 * (c00 + c11), opts);
        result.zeros.push_back({z, std::abs(w)});
      }
    }
  }
  result.min_abs = tracker.min_abs();
  floored = tracker.hit_floor();
  return result;
}

}  // namespace

WindingScanResult winding_scan(const std::function<Complex(Complex)>& f, const Rectangle& rect,
                               int nx, int ny, const ScanOptions& opts, int threads) {
  bool floored = false;
  WindingScanResult result = scan_once(f, rect, nx, ny, 0.0, 0.0, opts, threads, floored);
  if (!floored) return result;
  // One perturbation retry; a zero sitting on the contour moves off it.
  const double hx = (rect.re_hi - rect.re_lo) / nx;
  const double hy = (rect.im_hi - rect.im_lo) / ny;
  result = scan_once(f, rect, nx, ny, 0.37 * hx, 0.41 * hy, opts, threads, floored);
  if (floored)
    throw std::runtime_error("winding scan: contour runs through a zero even after perturbation");
  return result;
}

ResonanceReport resonance_scan(const OperatorAssembler& assembler, const Rectangle& rect,
                               int nx, int ny, const Representation& rep,
                               const ScanOptions& opts, int threads) {
  if (nx < 8 || ny < 8) throw std::invalid_argument("resonance grid must be at least 8x8");
  if (rect.re_lo <= 0.0) throw std::invalid_argument("rectangle must satisfy Re(s) > 0");
  auto f = [&](Complex s) { return fredholm_det(assembler, s, rep); };
  WindingScanResult scan = winding_scan(f, rect, nx, ny, opts, threads);
  ResonanceReport report;
  report.rectangle = rect;
  report.nx = nx;
  report.ny = ny;
  report.grid = std::move(scan.grid);
  report.zeros = std::move(scan.zeros);
  report.degree_cap = assembler.spec().degree_cap;
  return report;
}

std::optional<double> rightmost_real_zero(const OperatorAssembler& assembler,
                                          const Representation& rep, double re_lo,
                                          double re_hi, int samples, double tol) {
  auto value = [&](double r) { return fredholm_det(assembler, Complex(r, 0.0), rep).real(); };
  double step = (re_hi - re_lo) / samples;
  double prev_r = re_hi, prev_v = value(re_hi);
  for (int k = 1; k <= samples; ++k) {
    double r = re_hi - k * step;
    double v = value(r);
    if (prev_v == 0.0) return prev_r;
    if (v * prev_v < 0.0) {
      double lo = r, hi = prev_r, flo = v;
      while (hi - lo > tol) {
        double mid = 0.5 * (lo + hi);
        double fm = value(mid);
        if (fm == 0.0) return mid;
        if (fm * flo < 0.0) {
          hi = mid;
        } else {
          lo = mid;
          flo = fm;
        }
      }
      return 0.5 * (lo + hi);
    }
    prev_r = r;
    prev_v = v;
  }
  return std::nullopt;
}

}  // namespace schottky
