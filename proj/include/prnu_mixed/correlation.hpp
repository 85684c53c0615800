#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <map>
#include <memory>
#include <utility>
#include <vector>

#include "prnu_mixed/error.hpp"
#include "prnu_mixed/fft.hpp"
#include "prnu_mixed/plane.hpp"

namespace prnu {

struct Offset {
  std::ptrdiff_t dy = 0;
  std::ptrdiff_t dx = 0;
  friend bool operator==(const Offset&, const Offset&) = default;
};

// values(dy, dx) is the correlation with the template placed at (dy, dx).
// Circular surfaces wrap around at the edges. A non-zero peak region limits
// the peak search to its top-left corner of the surface.
struct NccSurface {
  PlaneD values;
  bool circular = false;
  std::size_t peak_rows = 0;
  std::size_t peak_cols = 0;
};

struct CorrelationResult {
  double peak_pce = 0.0;
  Offset peak_offset;
  std::size_t surface_rows = 0;
  std::size_t surface_cols = 0;
  double rho_at_peak = 0.0;
};

// PCE reported when the surface has no energy outside the peak window.
inline constexpr double kPceSaturated = 1e12;
// 11 x 11 exclusion window.
inline constexpr std::size_t kDefaultPceRadius = 5;

namespace detail {

inline double centered_norm(const PlaneD& p, double& mean_out) {
  mean_out = mean(p);
  double s = 0.0;
  for (double v : p.values()) s += (v - mean_out) * (v - mean_out);
  return std::sqrt(s);
}

// Summed-area table with a zero first row and column.
inline std::vector<double> integral(const PlaneD& a, bool squared) {
  const std::size_t rows = a.rows(), cols = a.cols(), w = cols + 1;
  std::vector<double> t((rows + 1) * w, 0.0);
  for (std::size_t r = 0; r < rows; ++r) {
    double run = 0.0;
    const double* src = a.data() + r * cols;
    for (std::size_t c = 0; c < cols; ++c) {
      run += squared ? src[c] * src[c] : src[c];
      t[(r + 1) * w + c + 1] = t[r * w + c + 1] + run;
    }
  }
  return t;
}

inline void check_template(const PlaneD& a, const PlaneD& b) {
  if (b.rows() > a.rows() || b.cols() > a.cols())
    throw DimensionError("ncc: template larger than the searched plane");
  if (b.empty()) throw DimensionError("ncc: empty template");
}

// Converts raw cross-correlation sums of a with a zero-mean template of norm
// `bnorm` into locally normalised coefficients.
inline PlaneD normalise_valid(const PlaneD& a, std::size_t hb, std::size_t wb, double bnorm,
                              const std::vector<double>& raw, std::size_t raw_stride) {
  const std::size_t sr = a.rows() - hb + 1, sc = a.cols() - wb + 1, w = a.cols() + 1;
  const auto s1 = integral(a, false);
  const auto s2 = integral(a, true);
  const double n = static_cast<double>(hb * wb);
  PlaneD out(sr, sc);
  for (std::size_t y = 0; y < sr; ++y)
    for (std::size_t x = 0; x < sc; ++x) {
      auto box = [&](const std::vector<double>& t) {
        return t[(y + hb) * w + x + wb] - t[y * w + x + wb] - t[(y + hb) * w + x] + t[y * w + x];
      };
      const double sum = box(s1), sq = box(s2);
      const double var = sq - sum * sum / n;
      double v = 0.0;
      if (var > 1e-12 * std::max(sq, 1e-300)) v = raw[y * raw_stride + x] / (bnorm * std::sqrt(var));
      out(y, x) = std::clamp(v, -1.0, 1.0);
    }
  return out;
}

}  // namespace detail

// Direct-space reference implementation of ncc_surface; O(HW hw).
inline NccSurface ncc_surface_direct(const PlaneD& a, const PlaneD& b) {
  detail::check_template(a, b);
  double mb = 0.0;
  const double nb = detail::centered_norm(b, mb);
  double ma = 0.0;
  if (nb <= 0.0 || detail::centered_norm(a, ma) <= 0.0) throw CorrelationError("ncc: zero-variance input");
  const std::size_t sr = a.rows() - b.rows() + 1, sc = a.cols() - b.cols() + 1;
  PlaneD out(sr, sc);
  const double n = static_cast<double>(b.size());
  for (std::size_t y = 0; y < sr; ++y)
    for (std::size_t x = 0; x < sc; ++x) {
      double wm = 0.0;
      for (std::size_t i = 0; i < b.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) wm += a(y + i, x + j);
      wm /= n;
      double num = 0.0, var = 0.0;
      for (std::size_t i = 0; i < b.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) {
          const double da = a(y + i, x + j) - wm;
          num += da * (b(i, j) - mb);
          var += da * da;
        }
      out(y, x) = var > 0.0 ? std::clamp(num / (nb * std::sqrt(var)), -1.0, 1.0) : 0.0;
    }
  return {std::move(out), false};
}

// Template correlator: the template's statistics and spectra (one per padded
// transform size) are computed once and reused across searched planes.
// Not thread-safe; use one instance per thread.
class TemplateCorrelator {
 public:
  explicit TemplateCorrelator(PlaneD templ) : templ_(std::move(templ)) {
    if (templ_.empty()) throw DimensionError("ncc: empty template");
    double m = 0.0;
    norm_ = detail::centered_norm(templ_, m);
    if (norm_ <= 0.0) throw CorrelationError("ncc: zero-variance template");
    for (double& v : templ_.values()) v -= m;
  }

  std::size_t rows() const { return templ_.rows(); }
  std::size_t cols() const { return templ_.cols(); }

  NccSurface surface(const PlaneD& a) {
    detail::check_template(a, templ_);
    double ma = 0.0;
    if (detail::centered_norm(a, ma) <= 0.0) throw CorrelationError("ncc: zero-variance input");
    Slot& s = slot(good_fft_size(a.rows()), good_fft_size(a.cols()));
    RealFft2d& fft = *s.fft;
    const std::size_t P = fft.rows(), Q = fft.cols();
    std::fill_n(fft.real(), P * Q, 0.0);
    for (std::size_t r = 0; r < a.rows(); ++r) std::copy_n(a.data() + r * a.cols(), a.cols(), fft.real() + r * Q);
    fft.forward();
    auto* spec = reinterpret_cast<std::complex<double>*>(fft.spectrum());
    const double scale = 1.0 / static_cast<double>(P * Q);
    for (std::size_t i = 0; i < fft.spectrum_size(); ++i) spec[i] *= std::conj(s.templ_spectrum[i]) * scale;
    fft.inverse();
    std::vector<double> raw(fft.real(), fft.real() + P * Q);
    return {detail::normalise_valid(a, templ_.rows(), templ_.cols(), norm_, raw, Q), false};
  }

  // Template zero-padded to a transform size covering `a`; every cyclic
  // shift is kept and the whole surface is normalised by the global norms.
  // Peaks are searched among the placements fully inside `a`.
  NccSurface padded_surface(const PlaneD& a) {
    detail::check_template(a, templ_);
    double ma = 0.0;
    const double na = detail::centered_norm(a, ma);
    if (na <= 0.0) throw CorrelationError("ncc: zero-variance input");
    Slot& s = slot(good_fft_size(a.rows()), good_fft_size(a.cols()));
    RealFft2d& fft = *s.fft;
    const std::size_t P = fft.rows(), Q = fft.cols();
    std::fill_n(fft.real(), P * Q, 0.0);
    for (std::size_t r = 0; r < a.rows(); ++r)
      for (std::size_t c = 0; c < a.cols(); ++c) fft.real()[r * Q + c] = a(r, c) - ma;
    fft.forward();
    auto* spec = reinterpret_cast<std::complex<double>*>(fft.spectrum());
    const double scale = 1.0 / (static_cast<double>(P * Q) * na * norm_);
    for (std::size_t i = 0; i < fft.spectrum_size(); ++i) spec[i] *= std::conj(s.templ_spectrum[i]) * scale;
    fft.inverse();
    PlaneD out(P, Q);
    for (std::size_t i = 0; i < P * Q; ++i) out.values()[i] = std::clamp(fft.real()[i], -1.0, 1.0);
    return {std::move(out), true, a.rows() - templ_.rows() + 1, a.cols() - templ_.cols() + 1};
  }

 private:
  struct Slot {
    std::unique_ptr<RealFft2d> fft;
    std::vector<std::complex<double>> templ_spectrum;
  };

  Slot& slot(std::size_t P, std::size_t Q) {
    auto key = std::make_pair(P, Q);
    auto it = slots_.find(key);
    if (it != slots_.end()) return it->second;
    Slot s;
    s.fft = std::make_unique<RealFft2d>(P, Q);
    std::fill_n(s.fft->real(), P * Q, 0.0);
    for (std::size_t r = 0; r < templ_.rows(); ++r)
      std::copy_n(templ_.data() + r * templ_.cols(), templ_.cols(), s.fft->real() + r * Q);
    s.fft->forward();
    auto* spec = reinterpret_cast<std::complex<double>*>(s.fft->spectrum());
    s.templ_spectrum.assign(spec, spec + s.fft->spectrum_size());
    // Keep memory bounded during long searches over many sizes.
    if (slots_.size() >= 8) slots_.erase(slots_.begin());
    return slots_.emplace(key, std::move(s)).first->second;
  }

  PlaneD templ_;
  double norm_ = 0.0;
  std::map<std::pair<std::size_t, std::size_t>, Slot> slots_;
};

// Locally normalised cross-correlation of template b at every placement
// fully inside a.
inline NccSurface ncc_surface(const PlaneD& a, const PlaneD& b) {
  detail::check_template(a, b);
  return TemplateCorrelator(b).surface(a);
}

inline NccSurface padded_ncc_surface(const PlaneD& a, const PlaneD& b) {
  detail::check_template(a, b);
  return TemplateCorrelator(b).padded_surface(a);
}

// Same-sized inputs, cyclic shifts, global normalisation.
inline NccSurface circular_ncc(const PlaneD& a, const PlaneD& b) {
  if (!a.same_shape(b)) throw DimensionError("circular ncc: shape mismatch");
  double ma = 0.0, mb = 0.0;
  const double na = detail::centered_norm(a, ma), nb = detail::centered_norm(b, mb);
  if (na <= 0.0 || nb <= 0.0) throw CorrelationError("ncc: zero-variance input");
  const std::size_t P = a.rows(), Q = a.cols();
  RealFft2d fa(P, Q), fb(P, Q);
  for (std::size_t i = 0; i < P * Q; ++i) {
    fa.real()[i] = (a.values()[i] - ma) / na;
    fb.real()[i] = (b.values()[i] - mb) / nb;
  }
  fa.forward();
  fb.forward();
  auto* sa = reinterpret_cast<std::complex<double>*>(fa.spectrum());
  auto* sb = reinterpret_cast<std::complex<double>*>(fb.spectrum());
  const double scale = 1.0 / static_cast<double>(P * Q);
  for (std::size_t i = 0; i < fa.spectrum_size(); ++i) sa[i] *= std::conj(sb[i]) * scale;
  fa.inverse();
  PlaneD out(P, Q);
  for (std::size_t i = 0; i < P * Q; ++i) out.values()[i] = std::clamp(fa.real()[i], -1.0, 1.0);
  return {std::move(out), true};
}

// Location of the maximum value within the peak region (first in
// row-major order on ties).
inline Offset find_peak(const NccSurface& s) {
  if (s.values.empty()) throw CorrelationError("empty correlation surface");
  const std::size_t rows = s.peak_rows ? std::min(s.peak_rows, s.values.rows()) : s.values.rows();
  const std::size_t cols = s.peak_cols ? std::min(s.peak_cols, s.values.cols()) : s.values.cols();
  Offset best;
  double bv = s.values(0, 0);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c)
      if (s.values(r, c) > bv) {
        bv = s.values(r, c);
        best = {static_cast<std::ptrdiff_t>(r), static_cast<std::ptrdiff_t>(c)};
      }
  return best;
}

// Signed peak-to-correlation energy: sign(p) p^2 / mean(v^2) over the
// surface outside a (2r+1)^2 window centred on the peak.
inline double pce(const NccSurface& s, Offset peak, std::size_t radius = kDefaultPceRadius) {
  const std::size_t rows = s.values.rows(), cols = s.values.cols(), win = 2 * radius + 1;
  if (rows < win || cols < win)
    throw CorrelationError("correlation surface " + std::to_string(rows) + "x" + std::to_string(cols) +
                           " smaller than the " + std::to_string(win) + "x" + std::to_string(win) +
                           " exclusion window");
  if (peak.dy < 0 || peak.dx < 0 || static_cast<std::size_t>(peak.dy) >= rows ||
      static_cast<std::size_t>(peak.dx) >= cols)
    throw CorrelationError("peak outside the surface");
  const auto r = static_cast<std::ptrdiff_t>(radius);
  auto excluded = [&](std::ptrdiff_t y, std::ptrdiff_t x) {
    std::ptrdiff_t dy = y - peak.dy, dx = x - peak.dx;
    if (s.circular) {
      const auto R = static_cast<std::ptrdiff_t>(rows), C = static_cast<std::ptrdiff_t>(cols);
      dy = ((dy % R) + R) % R;
      dx = ((dx % C) + C) % C;
      dy = std::min(dy, R - dy);
      dx = std::min(dx, C - dx);
    }
    return std::abs(dy) <= r && std::abs(dx) <= r;
  };
  double energy = 0.0;
  std::size_t n = 0;
  for (std::size_t y = 0; y < rows; ++y)
    for (std::size_t x = 0; x < cols; ++x) {
      if (excluded(static_cast<std::ptrdiff_t>(y), static_cast<std::ptrdiff_t>(x))) continue;
      const double v = s.values(y, x);
      energy += v * v;
      ++n;
    }
  const double p = s.values(static_cast<std::size_t>(peak.dy), static_cast<std::size_t>(peak.dx));
  if (n == 0 || energy <= 0.0) return p > 0.0 ? kPceSaturated : p < 0.0 ? -kPceSaturated : 0.0;
  const double value = p * p / (energy / static_cast<double>(n));
  return std::min(value, kPceSaturated) * (p < 0.0 ? -1.0 : 1.0);
}

inline CorrelationResult summarize(const NccSurface& s, std::size_t radius = kDefaultPceRadius) {
  const Offset peak = find_peak(s);
  return {pce(s, peak, radius), peak, s.values.rows(), s.values.cols(),
          s.values(static_cast<std::size_t>(peak.dy), static_cast<std::size_t>(peak.dx))};
}

inline CorrelationResult correlate(const PlaneD& a, const PlaneD& b, std::size_t radius = kDefaultPceRadius) {
  return summarize(ncc_surface(a, b), radius);
}

inline CorrelationResult correlate_circular(const PlaneD& a, const PlaneD& b, std::size_t radius = kDefaultPceRadius) {
  return summarize(circular_ncc(a, b), radius);
}

}  // namespace prnu
