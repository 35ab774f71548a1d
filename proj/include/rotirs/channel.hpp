#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "rotirs/geometry.hpp"
#include "rotirs/types.hpp"

namespace rotirs {

inline constexpr double kPureLos = std::numeric_limits<double>::infinity();

/// Rician factors (linear, kPureLos for a deterministic link) and the
/// 1 m reference power gain beta.
struct RicianParams {
    double kappa_g = kPureLos;
    double kappa_s = kPureLos;
    double kappa_f = kPureLos;
    double beta = 1e-4;

    static RicianParams uniform(double kappa, double beta);
    void validate() const;
    bool pure_los() const;
};

/// G: BS -> IRS 1 (N1 x M), S: IRS 1 -> IRS 2 (N2 x N1), f: IRS 2 -> user (N2).
struct ChannelSet {
    CMatrix g;
    CMatrix s;
    CVector f;
};

/// Rank-one factors of the planar-wavefront LoS matrices: G = g2 g1^T, S = s2 s1^T.
/// The link amplitude and the anchor-to-anchor phase are folded into g1 and s1;
/// g2 and s2 have unit-modulus entries.
struct LosSignature {
    CVector g1;  // M
    CVector g2;  // N1
    CVector s1;  // N1
    CVector s2;  // N2
    /// Largest (tx aperture + rx aperture) / anchor distance over both links.
    double aperture_ratio = 0.0;
    /// False when aperture_ratio exceeds the far-field threshold (a warning, not an error).
    bool far_field = true;
};

/// Anchor-to-anchor distances used for every channel amplitude.
struct FarFieldDistances {
    double t11 = 0.0;  // BS -> IRS 1
    double d11 = 0.0;  // IRS 1 -> IRS 2
    double r1 = 0.0;   // IRS 2 -> user
};

FarFieldDistances far_field_distances(const ScenarioGeometry& g);

enum class LosModel { Spherical, Planar };
enum class NlosAmplitude { AnchorDistance, PerElement };

struct ChannelOptions {
    LosModel los_model = LosModel::Spherical;
    NlosAmplitude nlos_amplitude = NlosAmplitude::AnchorDistance;
};

/// Exact-distance LoS matrix: entry (n, m) = sqrt(beta)/amp_distance * exp(-j 2 pi |rx_n - tx_m| / lambda).
CMatrix los_matrix(std::span<const Vec3> tx, std::span<const Vec3> rx, double beta, double wavelength,
                   double amp_distance);

/// Planar-wavefront approximation of los_matrix around the first element of each array.
CMatrix planar_los_matrix(std::span<const Vec3> tx, std::span<const Vec3> rx, double beta, double wavelength,
                          double amp_distance);

LosSignature los_signature_decomposition(const ScenarioGeometry& g, const Orientation& o1,
                                         const Orientation& o2, double beta,
                                         double far_field_threshold = 0.1);

/// Planar-wavefront IRS 2 -> user LoS vector consistent with the signature.
CVector planar_user_channel(const ScenarioGeometry& g, const Orientation& o2, double beta);

/// i.i.d. CN(0, 1) entries, column-major fill, deterministic in seed.
CMatrix complex_gaussian(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed);

/// sqrt(k/(k+1)) los + sqrt(1/(k+1)) sqrt(beta)/amp_distance CN(0,1). Infinite kappa returns los.
CMatrix rician_channel(const CMatrix& los, double kappa, double beta, double amp_distance, std::uint64_t seed);

/// Stream tags for per-link sub-seeds.
enum LinkTag : std::uint64_t { kLinkG = 1, kLinkS = 2, kLinkF = 3 };

/// Realizes channels for arbitrary orientations with the fading draws of one
/// trial frozen. Orientation only moves element positions, so repeated calls
/// with the same orientations return bit-identical channels.
class ChannelSynthesizer {
public:
    ChannelSynthesizer(const ScenarioGeometry& g, const RicianParams& params, std::uint64_t seed,
                       ChannelOptions options = {});

    ChannelSet operator()(const Orientation& o1, const Orientation& o2) const;
    void synthesize_into(const Orientation& o1, const Orientation& o2, ChannelSet& out) const;

    const ScenarioGeometry& geometry() const { return geometry_; }
    const RicianParams& params() const { return params_; }

private:
    ScenarioGeometry geometry_;
    RicianParams params_;
    ChannelOptions options_;
    FarFieldDistances dist_;
    std::vector<Vec3> bs_positions_;
    CMatrix draws_g_, draws_s_;
    CVector draws_f_;
};

ChannelSet synthesize_channels(const ScenarioGeometry& g, const Orientation& o1, const Orientation& o2,
                               const RicianParams& params, std::uint64_t seed, ChannelOptions options = {});

// Single-IRS link: G is N x M, f is N.
struct SingleChannelSet {
    CMatrix g;
    CVector f;
};

class SingleChannelSynthesizer {
public:
    SingleChannelSynthesizer(const SingleIrsGeometry& g, const RicianParams& params, std::uint64_t seed,
                             ChannelOptions options = {});

    SingleChannelSet operator()(const Orientation& o) const;

    const SingleIrsGeometry& geometry() const { return geometry_; }

private:
    SingleIrsGeometry geometry_;
    RicianParams params_;
    ChannelOptions options_;
    double t1_, r1_;
    std::vector<Vec3> bs_positions_;
    CMatrix draws_g_;
    CVector draws_f_;
};

}  // namespace rotirs
