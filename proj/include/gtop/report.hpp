#pragma once

// Verification reports: per-claim three-valued status plus a certificate.
//
// The JSON body is deterministic (claims sorted by id, no timestamps); wall
// time lives in a separate metadata object.

#include <string>
#include <vector>

#include "json.hpp"

namespace gtop {

using json = nlohmann::json;

enum class Status { verified, refuted, unknown };

std::string to_string(Status s);
Status status_from_string(const std::string& s);
// 0 verified, 2 refuted, 3 unknown.
int exit_code(Status s);
// refuted dominates unknown, which dominates verified.
Status combine(Status a, Status b);

struct Claim {
  std::string id;
  Status status = Status::unknown;
  json certificate = json::object();
};

class VerificationReport {
 public:
  explicit VerificationReport(std::string subject = {}) : subject_(std::move(subject)) {}

  void add(Claim claim) { claims_.push_back(std::move(claim)); }
  void add(std::string id, Status status, json certificate = json::object()) {
    claims_.push_back({std::move(id), status, std::move(certificate)});
  }
  void merge(const VerificationReport& other);

  const std::string& subject() const { return subject_; }
  const std::vector<Claim>& claims() const { return claims_; }
  const Claim* find(const std::string& id) const;
  Status status() const;

  json& budgets() { return budgets_; }
  const json& budgets() const { return budgets_; }
  // Free-form summary fields (e.g. an aggregate verdict).
  json& summary() { return summary_; }
  const json& summary() const { return summary_; }

  double wall_time() const { return wall_time_s_; }
  void set_wall_time(double seconds) { wall_time_s_ = seconds; }

  json to_json() const;
  json meta_json() const;
  static VerificationReport from_json(const json& j);

 private:
  std::string subject_;
  std::vector<Claim> claims_;
  json budgets_ = json::object();
  json summary_ = json::object();
  double wall_time_s_ = 0;
};

}  // namespace gtop
