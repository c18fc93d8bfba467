#pragma once

// Case study I: stop-sign safe-distance predicate.

#include <array>
#include <string_view>

#include "hermes/field/scaling.hpp"
#include "hermes/protocol/package.hpp"
#include "hermes/r1cs/constraint_system.hpp"

namespace hermes::circuits {

/// Longitudinal RSS inputs. The stop-sign case uses v_f = 0 and alpha_max = 0.
struct RssParams {
  double v = 0;       // rear (ego) speed, m/s
  double t_rec = 1;   // response time, s
  double mu = 0.75;   // friction coefficient
  double g = 9.81;    // m/s^2
  double alpha_max = 0;
  double beta_min = 0;  // 0 selects mu * g
  double beta_max = 0;  // 0 selects mu * g
  double v_f = 0;       // front-object speed, m/s
};

struct RssDistance {
  double reaction = 0;  // v t_rec
  double braking = 0;   // v^2 / (2 mu g)
  double total = 0;
};

/// v t_rec + v^2 / (2 mu g). UsageError when mu g <= 0 or an input is negative.
RssDistance rss_safe_distance(double v, double t_rec, double mu = 0.75, double g = 9.81);
/// The general five-term form, clamped at zero.
double rss_min_distance(const RssParams& p);

/// Literal safety predicate: 1 iff pr >= theta and d_current >= d_safe.
int evaluate_predicate(std::uint64_t pr, std::uint64_t theta, std::uint64_t d_current, std::uint64_t d_safe);
/// What the circuit computes: NOT(pr >= theta) OR (d_current >= d_safe).
int circuit_safe(std::uint64_t pr, std::uint64_t theta, std::uint64_t d_current, std::uint64_t d_safe);

struct RssConfig {
  std::uint64_t theta = 75;  // detection threshold, scaled by rho_prob
  std::uint64_t stop_sign_id = 11;
  unsigned prob_bits = 16;
  unsigned dist_bits = 32;
  std::uint64_t rho_prob = 100;      // probabilities and weather fractions
  std::uint64_t rho_dist = 100;      // distances, speed and box coordinates
  std::uint64_t rho_geo = 1000000;   // latitude / longitude degrees
  std::uint64_t rho_psi = 100;       // yaw degrees
};

/// Public instance in X order (c and SAFE are circuit outputs and come last).
struct RssPublicInputs {
  std::uint64_t id = 0;
  Fr d_safe, d_current, phi_s, lambda_s;
  std::uint64_t rho_prob = 0, rho_geo = 0, rho_psi = 0;
  Fr w_cloud, w_precip, w_fog;
  std::uint64_t timestamp = 0;
  protocol::Nonce nonce{};
  Fr c;
  bool safe = false;

  std::vector<Fr> to_vector() const;
};

struct RssWitness {
  Fr pr;
  std::array<Fr, 4> box;
  Fr phi_v, lambda_v, v, psi;
  Fr s_sec;
};

struct RssInstance {
  RssPublicInputs pub;
  RssWitness wit;

  /// Labelled inputs for ConstraintSystem::generate_witness.
  r1cs::Assignment assignment() const;
  /// The committed message m (everything hashed except s_sec), in circuit order.
  std::vector<Fr> commitment_message() const;
};

/// Real-valued scenario as read from a key/value file.
struct RssScenario {
  std::uint64_t object_id = 11;
  double probability = 0;
  std::array<double, 4> box{};  // x1, y1, x2, y2
  double lat_v = 0, lon_v = 0, speed = 0, yaw = 0;
  double lat_s = 0, lon_s = 0;
  double current_distance = 0;
  double t_rec = 1, mu = 0.75, g = 9.81;
  double cloud = 0, precip = 0, fog = 0;
};

/// "key = value" lines, '#' comments; box as four comma-separated numbers. ParseError on
/// unknown keys or malformed numbers.
RssScenario parse_rss_scenario(std::string_view text);
std::string format_rss_scenario(const RssScenario& s);

/// The worked example: 30 mph (13.41 m/s), 1 s reaction, stop sign 30 m ahead, Pr = 0.92.
RssScenario worked_rss_scenario();

/// Applies the scaling maps, computes d_S off-circuit and the expected outputs. UsageError
/// on range violations (probability outside [0,1], unordered box, values too wide for the
/// comparators, negative speed or distance).
RssInstance make_rss_inputs(const RssScenario& s, const RssConfig& cfg, std::uint64_t timestamp,
                            const protocol::Nonce& nonce, const Fr& s_sec);

r1cs::ConstraintSystem build_rss_circuit(const RssConfig& cfg = {});

}  // namespace hermes::circuits
