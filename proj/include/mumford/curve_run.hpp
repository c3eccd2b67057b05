#pragma once
// Batch front end: parses curve specifications, runs the pipeline
// certificate -> periods -> polarization -> characteristics -> coordinates,
// caches the period matrix per (configuration hash, truncation length), and
// emits deterministic line-oriented reports.

#include "mumford/lambda.hpp"

#include <array>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace mumford {

struct BallSpec {
  bool complement = false;
  Rational center;
  long radius = 0;
};

struct CurveSpec {
  long long prime = 5;
  int digits = 12;  // reported precision; the pipeline carries guard digits
  std::vector<std::pair<Rational, Rational>> pairs;
  std::optional<std::vector<BallSpec>> balls;
  int trunc_len = 14;
  int theta_radius = 8;
  long tolerance = 10;        // tail tolerance for the grouped products
  long probe_tolerance = 6;   // descent probe and coordinate agreement
  long safety_margin = 2;
  std::array<int, 3> normalization{0, 1, 2};
  // off-diagonal square-root branch flips, entries {i, j, 1} with 1-based i<j
  std::vector<std::array<int, 3>> branch_flips;

  int genus() const { return static_cast<int>(pairs.size()) - 1; }
  std::string canonical_text() const;
  std::string config_hash() const;
};

CurveSpec parse_curve_spec(const std::string& json_text);
CurveSpec load_curve_spec(const std::string& path);

struct RunReport {
  std::vector<std::string> body;
  std::vector<std::string> timings;
  bool ok = true;

  std::string text() const;
};

// The full stack over one curve specification. Stages build lazily; the
// period matrix goes through the file cache when a cache directory is set.
class CurveRun {
 public:
  explicit CurveRun(const CurveSpec& spec, std::string cache_dir = "");

  const CurveSpec& spec() const { return spec_; }
  const PadicContext& ctx() const { return *ctx_; }
  const WhittakerGroup& group() const { return *group_; }
  const CertificateReport& certificate();
  const OrbitEngine& engine();
  const PeriodMatrix& periods();
  bool periods_from_cache();
  const Polarization& polarization();
  const CharacteristicTable& table();
  const std::vector<Character>& embeddings();  // labels 0..2g+1

  RunReport run(const std::string& command);

 private:
  RunReport report_certify();
  RunReport report_periods();
  RunReport report_theta_table();
  RunReport report_lambdas();
  RunReport report_verify();
  void header_lines(RunReport& rep, const std::string& command);

  CurveSpec spec_;
  std::string cache_dir_;
  std::unique_ptr<PadicContext> ctx_;
  std::unique_ptr<WhittakerGroup> group_;
  std::optional<CertificateReport> cert_;
  std::unique_ptr<OrbitEngine> engine_;
  std::optional<PeriodMatrix> periods_;
  bool periods_cached_ = false;
  std::vector<Character> embeddings_;
  std::unique_ptr<Polarization> pol_;
  std::unique_ptr<CharacteristicTable> table_;
};

// Runs one subcommand; when out_dir is nonempty the report is also written
// to <out_dir>/<hash>-<command>.txt and the period cache lives underneath.
RunReport run_command(const std::string& command, const CurveSpec& spec,
                      const std::string& out_dir);

}  // namespace mumford
