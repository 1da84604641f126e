#include "cslam/wifi.hpp"

#include <algorithm>
#include <cmath>

namespace cslam {

RssPrediction predicted_rss(const AccessPoint& ap, const Vec2& receiver,
                            std::size_t walls_crossed) {
  RssPrediction out;
  double d = std::hypot(distance(ap.position, receiver), ap.mount_height_m);
  if (d < kMinApDistance) {
    d = kMinApDistance;
    out.distance_clamped = true;
  }
  out.rss_dbm = ap.transmit_power_dbm - ap.constant_k_db -
                10.0 * ap.path_loss_exponent * std::log10(d) -
                static_cast<double>(walls_crossed) * ap.wall_attenuation_db;
  return out;
}

FilteredRss filter_and_average(std::span<const double> samples,
                               const RssFilterOptions& options) {
  if (samples.empty()) {
    throw std::invalid_argument("filter_and_average: no samples");
  }
  double sum = 0.0;
  for (double x : samples) {
    if (!std::isfinite(x)) {
      throw std::invalid_argument("filter_and_average: non-finite sample");
    }
    sum += x;
  }
  const double n = static_cast<double>(samples.size());
  FilteredRss out;
  out.mean = sum / n;
  double sq = 0.0;
  for (double x : samples) {
    sq += (x - out.mean) * (x - out.mean);
  }
  out.spread = std::sqrt(options.normalize_by_count ? sq / n : sq);

  double kept_sum = 0.0;
  for (double x : samples) {
    if (std::abs(x - out.mean) <= out.spread) {
      kept_sum += x;
      ++out.kept;
    }
  }
  if (out.kept == 0) {
    out.degenerate = true;
    out.rss_star = out.mean;
  } else {
    out.rss_star = kept_sum / static_cast<double>(out.kept);
  }
  return out;
}

std::vector<WifiScan> scans_in_window(std::span<const WifiScan> scans, double center,
                                      double window) {
  std::vector<WifiScan> out;
  const double half = 0.5 * window;
  for (const WifiScan& s : scans) {
    if (s.timestamp >= center - half && s.timestamp <= center + half) {
      out.push_back(s);
    }
  }
  return out;
}

WifiFingerprint build_fingerprint(std::span<const WifiScan> scans,
                                  std::string location_id,
                                  const RssFilterOptions& options) {
  WifiFingerprint fp;
  fp.location_id = std::move(location_id);
  std::map<std::string, std::vector<double>> samples;
  for (const WifiScan& s : scans) {
    if (s.agent_id != scans.front().agent_id) {
      throw std::invalid_argument("build_fingerprint: scans from different agents");
    }
    for (const WifiReading& r : s.readings) {
      samples[r.mac].push_back(r.rss_dbm);
    }
  }
  for (const auto& [mac, values] : samples) {
    fp.entries.emplace(mac, filter_and_average(values, options).rss_star);
  }
  fp.degenerate = fp.entries.empty();
  return fp;
}

std::size_t common_mac_count(const WifiFingerprint& a, const WifiFingerprint& b) {
  std::size_t n = 0;
  auto ia = a.entries.begin();
  auto ib = b.entries.begin();
  while (ia != a.entries.end() && ib != b.entries.end()) {
    if (ia->first < ib->first) {
      ++ia;
    } else if (ib->first < ia->first) {
      ++ib;
    } else {
      ++n;
      ++ia;
      ++ib;
    }
  }
  return n;
}

double mac_similarity(const WifiFingerprint& a, const WifiFingerprint& b) {
  const std::size_t largest = std::max(a.entries.size(), b.entries.size());
  if (largest == 0) {
    return 0.0;
  }
  return static_cast<double>(common_mac_count(a, b)) / static_cast<double>(largest);
}

double rss_distance(const WifiFingerprint& a, const WifiFingerprint& b) {
  double sq = 0.0;
  std::size_t n = 0;
  for (const auto& [mac, rss] : a.entries) {
    const auto it = b.entries.find(mac);
    if (it != b.entries.end()) {
      const double diff = rss - it->second;
      sq += diff * diff;
      ++n;
    }
  }
  if (n == 0) {
    throw IncomparableFingerprints("rss_distance: fingerprints share no mac");
  }
  return std::sqrt(sq);
}

double rss_similarity(double distance_db, std::size_t n_common, double sigma_scale_db) {
  if (!(distance_db >= 0.0) || n_common == 0 || !(sigma_scale_db > 0.0)) {
    throw std::invalid_argument("rss_similarity: invalid arguments");
  }
  return std::exp(-distance_db /
                  (sigma_scale_db * std::sqrt(static_cast<double>(n_common))));
}

namespace {

void fill_rss(WifiMatchScore& score, const WifiFingerprint& a, const WifiFingerprint& b,
              double sigma_scale_db) {
  if (score.common_macs == 0) {
    score.degenerate = true;
    return;
  }
  const double d = rss_distance(a, b);
  score.rss_distance_db = d;
  score.rss_similarity = rss_similarity(d, score.common_macs, sigma_scale_db);
}

}  // namespace

WifiMatchScore score_wifi(const WifiFingerprint& a, const WifiFingerprint& b,
                          double sigma_scale_db) {
  WifiMatchScore score;
  score.mac_similarity = mac_similarity(a, b);
  score.common_macs = common_mac_count(a, b);
  score.degenerate = a.empty() || b.empty();
  fill_rss(score, a, b, sigma_scale_db);
  return score;
}

WifiMatchResult is_wifi_match(const WifiFingerprint& a, const WifiFingerprint& b,
                              const WifiGate& gate) {
  if (!(gate.beta >= 0.0 && gate.beta <= 1.0 && gate.gamma >= 0.0 && gate.gamma <= 1.0)) {
    throw std::invalid_argument("is_wifi_match: thresholds outside [0, 1]");
  }
  WifiMatchResult result;
  result.score.mac_similarity = mac_similarity(a, b);
  result.score.common_macs = common_mac_count(a, b);
  result.score.degenerate = a.empty() || b.empty();
  if (result.score.mac_similarity < gate.beta) {
    result.outcome = WifiGateOutcome::kRejectedMac;
    return result;
  }
  fill_rss(result.score, a, b, gate.sigma_scale_db);
  if (!result.score.rss_similarity || *result.score.rss_similarity < gate.gamma) {
    result.outcome = WifiGateOutcome::kRejectedRss;
    return result;
  }
  result.match = true;
  result.outcome = WifiGateOutcome::kMatch;
  return result;
}

}  // namespace cslam
