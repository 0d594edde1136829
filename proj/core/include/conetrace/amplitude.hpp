#pragma once

#include <string>
#include <vector>

#include "conetrace/geometry.hpp"
#include "conetrace/jacobi.hpp"
#include "conetrace/link_spectrum.hpp"

namespace conetrace {

// Smooth frequency cutoff: 0 below `lower`, 1 above `upper`. Used for the
// propagator symbols and for the trace model kernel.
struct CutoffSpec {
  enum class Profile { PolynomialC2 };
  double lower = 1.0;
  double upper = 2.0;
  Profile profile = Profile::PolynomialC2;

  double operator()(double xi) const;
};

struct AmplitudeValue {
  enum class Frame { MetricHalfDensity };
  cplx scalar{};
  double frequency_order = 0.0;
  Frame frame = Frame::MetricHalfDensity;
  static constexpr const char* phase_convention = "(sum of distances - t) * xi";
};

AmplitudeValue single_diffraction_amplitude(const DiffractionValue& D, double x, double x_prime,
                                            double theta_in, double theta_out, int n);

AmplitudeValue interior_amplitude(double d, int morse, double theta, int n);

struct ShortTimeAmplitude {
  AmplitudeValue full;     // t e^{-i pi (n-1)/4} pi^{-(n+1)/2} (d+t)^{-(n+1)/2} Theta^{-1/2}
  AmplitudeValue reduced;  // at the front t = d: d^{-(n-1)/2} (2 pi)^{-(n+1)/2}
};
ShortTimeAmplitude short_time_amplitude(double d, double t, int n, double theta = 1.0);

// Open chain: k diffractions and k + 1 segments. Closed chain: k and k.
AmplitudeValue multi_diffraction_amplitude(const std::vector<SegmentInvariants>& segments,
                                           const std::vector<DiffractionValue>& diffractions, int n,
                                           cplx microlocalizer = 1.0);

enum class LengthConvention { Primitive, Full };  // L0 or L as the prefactor

struct TraceSingularityPrediction {
  enum class Model { InverseSqrt, Log, GeneralPower };
  double L = 0.0, L0 = 0.0;
  int k = 0;
  int n = 2;
  double order = 0.0;
  cplx coefficient{};
  Model model = Model::GeneralPower;
  LengthConvention convention = LengthConvention::Primitive;
  std::vector<SegmentInvariants> segments;
  std::vector<DiffractionValue> diffractions;  // diffractions[j] sits at the end of segments[j]
};

const char* model_name(TraceSingularityPrediction::Model m);

// Leading coefficient from per-segment data. Junction j joins the end of
// segment j to the start of segment j + 1 (cyclically).
TraceSingularityPrediction trace_singularity(const std::vector<SegmentInvariants>& segments,
                                             const std::vector<DiffractionValue>& diffractions,
                                             double L, double L0, int n,
                                             LengthConvention conv = LengthConvention::Primitive);

// Full pipeline on a solved closed geodesic (n = 2, closed-form kernels).
TraceSingularityPrediction trace_singularity(const SurfaceModel& s, const DiffractiveGeodesic& g,
                                             LengthConvention conv = LengthConvention::Primitive,
                                             const JacobiOptions& jopt = {});

// Second route: closed-chain multi-diffraction amplitude times the Morse-Bott
// factor e^{i pi (n-1)/4} (2 pi)^{(n+1)/2}, integrated along the primitive loop.
cplx morse_bott_trace_coefficient(const TraceSingularityPrediction& p);

struct ModelKernelOptions {
  double smoothing_sigma = 0.0;  // > 0: multiply by exp(-xi^2 / (2 sigma^2))
};

// Samples of coefficient * integral over xi of e^{-i (t - L) xi} chi(xi) xi^{-order}.
std::vector<cplx> model_kernel(const TraceSingularityPrediction& p, const CutoffSpec& cutoff,
                               const std::vector<double>& t_grid, const ModelKernelOptions& opt = {});
// The same integral for an explicit order with unit coefficient.
std::vector<cplx> model_kernel(double order, double L, const CutoffSpec& cutoff,
                               const std::vector<double>& t_grid, const ModelKernelOptions& opt = {});

}  // namespace conetrace
