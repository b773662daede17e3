#include "conedecay/harness.hpp"

#include "conedecay/types.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>

namespace conedecay::harness {

std::string to_string(Status s) {
  switch (s) {
    case Status::Pass: return "PASS";
    case Status::Fail: return "FAIL";
    case Status::Warn: return "WARN";
  }
  return "?";
}

Check& VerificationReport::add(Check c) {
  if (find(c.name)) throw ConfigError("duplicate check '" + c.name + "'");
  checks_.push_back(std::move(c));
  return checks_.back();
}

Check& VerificationReport::check_le(const std::string& name, double measured, double tol, double runtime_s,
                                    const std::string& detail) {
  return check_within(name, measured, -std::numeric_limits<double>::infinity(), tol, runtime_s, detail);
}

Check& VerificationReport::check_ge(const std::string& name, double measured, double tol, double runtime_s,
                                    const std::string& detail) {
  return check_within(name, measured, tol, std::numeric_limits<double>::infinity(), runtime_s, detail);
}

Check& VerificationReport::check_within(const std::string& name, double measured, double lo, double hi,
                                        double runtime_s, const std::string& detail) {
  Check c;
  c.name = name;
  c.measured = measured;
  c.lo = lo;
  c.hi = hi;
  c.runtime_s = runtime_s;
  c.detail = detail;
  c.status = (std::isfinite(measured) && measured >= lo && measured <= hi) ? Status::Pass : Status::Fail;
  return add(std::move(c));
}

Check& VerificationReport::warn(const std::string& name, const std::string& detail, double measured) {
  Check c;
  c.name = name;
  c.status = Status::Warn;
  c.measured = measured;
  c.detail = detail;
  return add(std::move(c));
}

Check& VerificationReport::fail(const std::string& name, const std::string& detail, double runtime_s) {
  Check c;
  c.name = name;
  c.status = Status::Fail;
  c.detail = detail;
  c.runtime_s = runtime_s;
  return add(std::move(c));
}

void VerificationReport::merge(const VerificationReport& other) {
  for (const Check& c : other.checks_) add(c);
  fits_.insert(fits_.end(), other.fits_.begin(), other.fits_.end());
}

const Check* VerificationReport::find(const std::string& name) const {
  for (const Check& c : checks_) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

std::size_t VerificationReport::count(Status s) const {
  std::size_t n = 0;
  for (const Check& c : checks_) n += c.status == s ? 1 : 0;
  return n;
}

namespace {

nlohmann::json number(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return nullptr;
  return v > 0 ? "inf" : "-inf";
}

}  // namespace

nlohmann::json VerificationReport::to_json() const {
  nlohmann::json checks = nlohmann::json::array();
  for (const Check& c : checks_) {
    checks.push_back({{"name", c.name},
                      {"status", to_string(c.status)},
                      {"measured", number(c.measured)},
                      {"tolerance", {{"min", number(c.lo)}, {"max", number(c.hi)}}},
                      {"runtime_s", c.runtime_s},
                      {"detail", c.detail}});
  }
  nlohmann::json fits = nlohmann::json::array();
  for (const FitRow& f : fits_) {
    fits.push_back({{"scenario", f.scenario},
                    {"profile", f.profile},
                    {"mode", to_string(f.mode)},
                    {"exponent", number(f.fit.exponent)},
                    {"r2", number(f.fit.r2)},
                    {"points", f.fit.points}});
  }
  return {{"checks", checks},
          {"fits", fits},
          {"summary",
           {{"pass", count(Status::Pass)}, {"fail", count(Status::Fail)}, {"warn", count(Status::Warn)}}},
          {"all_pass", all_pass()}};
}

void VerificationReport::write(const std::string& dir) const {
  std::filesystem::create_directories(dir);
  {
    std::ofstream out(std::filesystem::path(dir) / "report.json");
    if (!out) throw IoError("cannot write report.json in " + dir);
    out << std::setw(2) << to_json() << '\n';
  }
  std::ofstream out(std::filesystem::path(dir) / "fits.csv");
  if (!out) throw IoError("cannot write fits.csv in " + dir);
  out << "scenario,profile,mode,exponent,r2,points\n";
  out.precision(10);
  for (const FitRow& f : fits_) {
    out << f.scenario << ',' << f.profile << ',' << to_string(f.mode) << ',' << f.fit.exponent << ',' << f.fit.r2
        << ',' << f.fit.points << '\n';
  }
}

void VerificationReport::print(std::ostream& os) const {
  for (const Check& c : checks_) {
    os << std::left << std::setw(5) << to_string(c.status) << ' ' << c.name;
    if (std::isfinite(c.measured)) os << "  measured=" << std::setprecision(6) << c.measured;
    if (std::isfinite(c.lo)) os << "  min=" << c.lo;
    if (std::isfinite(c.hi)) os << "  max=" << c.hi;
    if (c.runtime_s > 0.0) os << "  (" << std::setprecision(3) << c.runtime_s << " s)";
    if (!c.detail.empty()) os << "  " << c.detail;
    os << '\n';
  }
  os << count(Status::Pass) << " passed, " << count(Status::Fail) << " failed, " << count(Status::Warn)
     << " warnings\n";
}

void save_profile(const ScenarioConfig& cfg, const DecayProfile& p, const std::string& name) {
  const auto dir = std::filesystem::path(cfg.out_dir) / "profiles";
  std::filesystem::create_directories(dir);
  p.write_csv((dir / (name + ".csv")).string());
}

}  // namespace conedecay::harness
