#include "gtop/report.hpp"

#include <algorithm>

#include "gtop/error.hpp"

namespace gtop {

std::string to_string(Status s) {
  switch (s) {
    case Status::verified: return "verified";
    case Status::refuted: return "refuted";
    default: return "unknown";
  }
}

Status status_from_string(const std::string& s) {
  if (s == "verified") {
    return Status::verified;
  }
  if (s == "refuted") {
    return Status::refuted;
  }
  if (s == "unknown") {
    return Status::unknown;
  }
  throw ParseError("invalid status '" + s + "'");
}

int exit_code(Status s) {
  switch (s) {
    case Status::verified: return 0;
    case Status::refuted: return 2;
    default: return 3;
  }
}

Status combine(Status a, Status b) {
  if (a == Status::refuted || b == Status::refuted) {
    return Status::refuted;
  }
  if (a == Status::unknown || b == Status::unknown) {
    return Status::unknown;
  }
  return Status::verified;
}

void VerificationReport::merge(const VerificationReport& other) {
  claims_.insert(claims_.end(), other.claims_.begin(), other.claims_.end());
  wall_time_s_ += other.wall_time_s_;
}

const Claim* VerificationReport::find(const std::string& id) const {
  for (const auto& c : claims_) {
    if (c.id == id) {
      return &c;
    }
  }
  return nullptr;
}

Status VerificationReport::status() const {
  Status s = Status::verified;
  for (const auto& c : claims_) {
    s = combine(s, c.status);
  }
  return s;
}

json VerificationReport::to_json() const {
  std::vector<const Claim*> sorted;
  for (const auto& c : claims_) {
    sorted.push_back(&c);
  }
  std::stable_sort(sorted.begin(), sorted.end(), [](const Claim* a, const Claim* b) { return a->id < b->id; });
  json claims = json::array();
  std::size_t counts[3] = {0, 0, 0};
  for (const auto* c : sorted) {
    claims.push_back({{"id", c->id}, {"status", to_string(c->status)}, {"certificate", c->certificate}});
    ++counts[static_cast<int>(c->status)];
  }
  json j;
  j["schema"] = 1;
  j["subject"] = subject_;
  j["status"] = to_string(status());
  j["counts"] = {{"verified", counts[0]}, {"refuted", counts[1]}, {"unknown", counts[2]}};
  j["summary"] = summary_;
  j["budgets"] = budgets_;
  j["claims"] = std::move(claims);
  return j;
}

json VerificationReport::meta_json() const {
  return {{"schema", 1}, {"subject", subject_}, {"wall_time_s", wall_time_s_}};
}

VerificationReport VerificationReport::from_json(const json& j) {
  if (!j.is_object() || j.value("schema", 0) != 1) {
    throw ParseError("not a schema-1 verification report");
  }
  VerificationReport r(j.value("subject", std::string{}));
  if (j.contains("budgets")) {
    r.budgets_ = j.at("budgets");
  }
  if (j.contains("summary")) {
    r.summary_ = j.at("summary");
  }
  for (const auto& c : j.at("claims")) {
    r.add(c.at("id").get<std::string>(), status_from_string(c.at("status").get<std::string>()),
          c.value("certificate", json::object()));
  }
  return r;
}

}  // namespace gtop
