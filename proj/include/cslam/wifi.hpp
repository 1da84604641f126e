#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cslam/geometry.hpp"

namespace cslam {

struct WifiReading {
  std::string mac;
  double rss_dbm = 0.0;

  friend bool operator==(const WifiReading&, const WifiReading&) = default;
};

struct WifiScan {
  double timestamp = 0.0;
  std::string agent_id;
  std::vector<WifiReading> readings;

  friend bool operator==(const WifiScan&, const WifiScan&) = default;
};

struct WifiFingerprint {
  std::string location_id;
  // mac -> outlier-filtered mean RSS (dBm). Ordered so every pass over the
  // entries is deterministic.
  std::map<std::string, double> entries;
  // No readings were available when the fingerprint was built.
  bool degenerate = false;

  bool empty() const { return entries.empty(); }

  friend bool operator==(const WifiFingerprint&, const WifiFingerprint&) = default;
};

// Log-distance transmitter model with per-wall attenuation.
struct AccessPoint {
  std::string mac;
  Vec2 position;
  double transmit_power_dbm = 20.0;
  double constant_k_db = 40.0;
  double path_loss_exponent = 3.0;
  double noise_sigma_db = 2.0;
  double wall_attenuation_db = 10.0;
  // Height above the receiver plane; the path length is the 3-D distance.
  double mount_height_m = 0.0;

  friend bool operator==(const AccessPoint&, const AccessPoint&) = default;
};

// Distances below this are clamped before taking the logarithm.
inline constexpr double kMinApDistance = 0.1;

struct RssPrediction {
  double rss_dbm = 0.0;
  bool distance_clamped = false;
};

// RSS = Pt - K - 10 * zeta * log10(d) - walls * attenuation, with d the
// straight-line distance including the mount height.
RssPrediction predicted_rss(const AccessPoint& ap, const Vec2& receiver,
                            std::size_t walls_crossed);

struct RssFilterOptions {
  // Divide the squared-deviation sum by n before the square root. Off by
  // default: the spread R is the plain root of the summed squares.
  bool normalize_by_count = false;
};

struct FilteredRss {
  double rss_star = 0.0;
  double mean = 0.0;
  double spread = 0.0;
  std::size_t kept = 0;
  // Every sample was rejected; rss_star falls back to the mean.
  bool degenerate = false;
};

// Mean of the samples within `spread` of the sample mean.
// Throws std::invalid_argument on an empty or non-finite input.
FilteredRss filter_and_average(std::span<const double> samples,
                               const RssFilterOptions& options = {});

// Scans whose timestamp lies within [center - window/2, center + window/2].
std::vector<WifiScan> scans_in_window(std::span<const WifiScan> scans, double center,
                                      double window);

// One entry per distinct mac, valued by filter_and_average over all of that
// mac's samples. Throws std::invalid_argument if scans come from different
// agents. An input without readings yields an empty, degenerate fingerprint.
WifiFingerprint build_fingerprint(std::span<const WifiScan> scans,
                                  std::string location_id = {},
                                  const RssFilterOptions& options = {});

std::size_t common_mac_count(const WifiFingerprint& a, const WifiFingerprint& b);

// |common macs| / max(|macs a|, |macs b|). Both empty gives 0.
double mac_similarity(const WifiFingerprint& a, const WifiFingerprint& b);

class IncomparableFingerprints : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Euclidean distance between the RSS* vectors restricted to common macs.
// Throws IncomparableFingerprints when no mac is shared.
double rss_distance(const WifiFingerprint& a, const WifiFingerprint& b);

// exp(-d / (sigma_scale * sqrt(n_common))).
double rss_similarity(double distance_db, std::size_t n_common, double sigma_scale_db);

struct WifiMatchScore {
  double mac_similarity = 0.0;
  // Unset when the MAC gate already rejected the pair.
  std::optional<double> rss_distance_db;
  std::optional<double> rss_similarity;
  std::size_t common_macs = 0;
  bool degenerate = false;

  friend bool operator==(const WifiMatchScore&, const WifiMatchScore&) = default;
};

enum class WifiGateOutcome { kMatch, kRejectedMac, kRejectedRss };

struct WifiGate {
  double beta = 0.8;
  double gamma = 0.8;
  double sigma_scale_db = 10.0;
};

struct WifiMatchResult {
  bool match = false;
  WifiGateOutcome outcome = WifiGateOutcome::kRejectedMac;
  WifiMatchScore score;
};

// MAC gate (M_s >= beta) first; the RSS gate (similarity >= gamma) runs only
// when the MAC gate passes.
WifiMatchResult is_wifi_match(const WifiFingerprint& a, const WifiFingerprint& b,
                              const WifiGate& gate);

// Both indicators computed without short-circuit (used for threshold sweeps).
WifiMatchScore score_wifi(const WifiFingerprint& a, const WifiFingerprint& b,
                          double sigma_scale_db);

}  // namespace cslam
