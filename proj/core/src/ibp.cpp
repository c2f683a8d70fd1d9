#include "farf/ibp.hpp"

#include <cmath>
#include <numeric>

#include "farf/error.hpp"
#include "farf/resize.hpp"

namespace farf {

void IbpParams::validate() const {
  if (iterations < 0) throw InvalidArgument("ibp: iterations must be >= 0");
  if (!(step > 0.0 && step <= 1.0)) throw InvalidArgument("ibp: step must be in (0, 1]");
  if (kernel.empty()) {
    if (!(sigma_per_scale > 0.0)) throw InvalidArgument("ibp: sigma_per_scale must be positive");
  } else {
    if (kernel.size() % 2 == 0) throw InvalidArgument("ibp: kernel needs an odd number of taps");
    const double sum = std::accumulate(kernel.begin(), kernel.end(), 0.0);
    if (std::abs(sum - 1.0) > 1e-9) throw InvalidArgument("ibp: kernel taps must sum to 1");
  }
}

std::vector<double> IbpParams::kernel_for(int scale) const {
  return kernel.empty() ? gaussian_taps(sigma_per_scale * scale) : kernel;
}

namespace {

ImagePlane lr_error(const ImagePlane& lr, const ImagePlane& hr, const DegradeSpec& spec) {
  ImagePlane e = degrade(hr, spec);
  auto ed = e.data();
  auto ld = lr.data();
  for (std::size_t i = 0; i < ed.size(); ++i) ed[i] = ld[i] - ed[i];
  return e;
}

double l2(const ImagePlane& p) {
  double s = 0.0;
  for (double v : p.data()) s += v * v;
  return std::sqrt(s);
}

}  // namespace

double lr_residual_norm(const ImagePlane& lr, const ImagePlane& hr, const DegradeSpec& spec) {
  if (hr.width() != lr.width() * spec.scale || hr.height() != lr.height() * spec.scale) {
    throw InvalidArgument("lr_residual_norm: HR dims must be LR dims times the scale");
  }
  return l2(lr_error(lr, hr, spec));
}

IbpTrace ibp_upscale_traced(const ImagePlane& lr, const DegradeSpec& spec,
                            const IbpParams& params) {
  spec.validate();
  params.validate();
  if (lr.empty()) throw InvalidArgument("ibp: empty input");
  const int s = spec.scale;
  const std::vector<double> p = params.kernel_for(s);

  IbpTrace trace;
  trace.image = resize_bicubic(lr, static_cast<double>(s));
  ImagePlane error = lr_error(lr, trace.image, spec);
  double norm = l2(error);
  trace.residual_norms.push_back(norm);

  for (int it = 0; it < params.iterations && norm > 0.0; ++it) {
    const ImagePlane back = convolve_separable(resize_bicubic(error, static_cast<double>(s)), p);
    ImagePlane next = trace.image;
    auto nd = next.data();
    auto bd = back.data();
    for (std::size_t i = 0; i < nd.size(); ++i) nd[i] += params.step * bd[i];

    ImagePlane next_error = lr_error(lr, next, spec);
    const double next_norm = l2(next_error);
    if (next_norm > norm) {
      trace.early_stopped = true;
      break;
    }
    trace.image = std::move(next);
    error = std::move(next_error);
    norm = next_norm;
    trace.residual_norms.push_back(norm);
  }
  return trace;
}

ImagePlane ibp_upscale(const ImagePlane& lr, const DegradeSpec& spec, const IbpParams& params) {
  return ibp_upscale_traced(lr, spec, params).image;
}

}  // namespace farf
