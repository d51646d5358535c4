#pragma once

#include "padic/disc_measure.hpp"
#include "padic/exact_rational.hpp"
#include "padic/padic_int.hpp"
#include "padic/paircorr.hpp"
#include "padic/sequences.hpp"
#include "padic/verify.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace padic::cli {

inline constexpr std::string_view kVersion = "0.1.0";

enum ExitCode : int { kSuccess = 0, kValidationError = 1, kCounterexample = 2 };

/// Guard digits required beyond the largest radius class of a run.
inline constexpr std::size_t kGuardDigits = 4;

struct RunConfig {
  std::string command;
  std::uint32_t p = 3;
  std::string alpha = "1";
  std::vector<std::string> s_list = {"0.1", "0.25", "0.5", "1", "2"};
  std::size_t n_from = 1;
  std::size_t n_max = 5000;
  std::optional<std::size_t> precision;  // 32, or 4 for verify
  std::string seq = "sqrt";
  std::optional<std::uint64_t> seed;
  std::string in;
  std::string out;
  std::string format = "csv";
  std::string statistic = "padic";
  unsigned threads = 1;
  std::uint64_t budget = kDefaultEnumerationBudget;

  std::size_t resolved_precision() const { return precision.value_or(command == "verify" ? 4 : 32); }
};

/// Raised for bad flags or inputs; maps to exit code 1.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Formatting -------------------------------------------------------------------

/// Shortest round-trip text in plain decimal notation.
inline std::string format_double(double value) {
  char buffer[400];
  const auto result = std::to_chars(buffer, buffer + sizeof buffer, value, std::chars_format::fixed);
  return std::string(buffer, result.ptr);
}

inline std::string csv_header() { return "N,alpha,s,p,k,mu,count,F"; }

inline std::string csv_row(const PairCorrRow& row) {
  std::string line = std::to_string(row.n);
  line += ',' + row.alpha.to_string();
  line += ',' + row.s.to_display();
  line += ',' + std::to_string(row.p);
  line += ',' + std::to_string(row.k);
  line += ',' + row.mu.to_string();
  line += ',' + std::to_string(row.count);
  line += ',' + format_double(row.f);
  return line;
}

inline std::string gnuplot_script(const std::string& csv_path, std::span<const ExactRational> s_list,
                                  std::uint32_t p) {
  std::ostringstream script;
  script << "# renders " << csv_path << "\n"
         << "set datafile separator ','\n"
         << "set datafile commentschars '#N'\n"
         << "set xlabel 'N'\n"
         << "set ylabel 'F_{N," << "alpha," << p << "}(s)'\n"
         << "set key outside right\n"
         << "set yrange [0:*]\n"
         << "plot \\\n";
  for (const auto& s : s_list) {
    const auto text = s.to_display();
    script << "  '" << csv_path << "' using 1:(strcol(3) eq '" << text << "' ? $8 : 1/0) with lines title 's = "
           << text << "', \\\n";
  }
  script << "  1 with lines dashtype 2 lc rgb 'black' title 'limit'\n";
  return script.str();
}

// Config resolution ---------------------------------------------------------------

inline SequenceKind parse_kind(const std::string& text) {
  if (text == "sqrt") return SequenceKind::sqrt_frac;
  if (text == "vdc") return SequenceKind::vdc;
  if (text == "naturals") return SequenceKind::naturals;
  if (text == "random") return SequenceKind::uniform_random;
  if (text == "file") return SequenceKind::file;
  throw ValidationError("unknown sequence kind '" + text + "'");
}

inline SequenceSpec sequence_spec(const RunConfig& config) {
  SequenceSpec spec;
  spec.kind = parse_kind(config.seq);
  spec.p = config.p;
  spec.m = config.resolved_precision();
  spec.count = config.n_max;
  spec.seed = config.seed;
  spec.path = config.in;
  if (spec.kind == SequenceKind::file && spec.path.empty()) throw ValidationError("--seq file needs --in <path>");
  return spec;
}

inline std::vector<ExactRational> parse_s_list(const RunConfig& config) {
  std::vector<ExactRational> out;
  for (const auto& text : config.s_list) {
    auto s = ExactRational::parse(text);
    if (s.is_negative()) throw ValidationError("s must be >= 0, got " + text);
    out.push_back(std::move(s));
  }
  if (out.empty()) throw ValidationError("--s needs at least one value");
  return out;
}

/// m >= k0(s_min, N_max, alpha) + guard digits.
inline void check_precision_guard(std::uint32_t p, std::size_t m, std::span<const ExactRational> s_list,
                                  std::uint64_t n_max, Alpha alpha) {
  std::optional<ExactRational> s_min;
  for (const auto& s : s_list) {
    if (!s.is_zero() && (!s_min || s < *s_min)) s_min = s;
  }
  if (!s_min) return;
  const auto k0 = disc_measure(p, *s_min, n_max, alpha).k0;
  if (m < k0 + kGuardDigits) {
    throw ValidationError("precision m = " + std::to_string(m) + " too small: s = " + s_min->to_display() +
                          " at N = " + std::to_string(n_max) + " needs k0 = " + std::to_string(k0) + " plus " +
                          std::to_string(kGuardDigits) + " guard digits");
  }
}

inline std::string metadata(const RunConfig& config, std::span<const ExactRational> s_list,
                            std::size_t m, std::string_view seq) {
  std::ostringstream meta;
  meta << "# padic-pc " << kVersion << "\n# command=" << config.command << " seq=" << seq << " p=" << config.p
       << " m=" << m << " alpha=" << Alpha::parse(config.alpha).to_string() << " s=";
  for (std::size_t i = 0; i < s_list.size(); ++i) meta << (i ? "," : "") << s_list[i].to_display();
  meta << " N=" << (config.command == "stats" ? config.n_max : config.n_from) << ".." << config.n_max;
  if (config.seed) meta << " seed=" << *config.seed;
  if (!config.in.empty()) meta << " in=" << config.in;
  meta << "\n";
  return meta.str();
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw ValidationError("cannot open '" + path + "' for writing");
  file << text;
  if (!file) throw ValidationError("write to '" + path + "' failed");
}

inline void emit(const RunConfig& config, const std::string& text, std::ostream& out) {
  if (config.out.empty()) {
    out << text;
  } else {
    write_text(config.out, text);
  }
}

// Commands ----------------------------------------------------------------------

inline int cmd_gen(const RunConfig& config, std::ostream& out) {
  const auto spec = sequence_spec(config);
  const auto xs = make_sequence(spec);
  std::ostringstream text;
  write_sequence(text, xs);
  emit(config, text.str(), out);
  return kSuccess;
}

inline int cmd_stats(const RunConfig& config, std::ostream& out) {
  const auto alpha = Alpha::parse(config.alpha);
  const auto s_list = parse_s_list(config);
  const auto xs = make_sequence(sequence_spec(config));
  const std::size_t m = xs.front().precision();
  const std::uint32_t p = xs.front().prime();

  std::ostringstream text;
  text << metadata(config, s_list, m, config.seq) << csv_header() << '\n';
  if (config.statistic == "padic") {
    check_precision_guard(p, m, s_list, config.n_max, alpha);
    for (const auto& s : s_list) text << csv_row(padic_pair_corr(xs, config.n_max, alpha, s)) << '\n';
  } else if (config.statistic == "real") {
    std::vector<ExactRational> ys;
    ys.reserve(xs.size());
    for (const auto& x : xs) ys.push_back(monna(x));
    for (const auto& s : s_list) text << csv_row(real_pair_corr(ys, config.n_max, alpha, s)) << '\n';
  } else {
    throw ValidationError("unknown statistic '" + config.statistic + "'");
  }
  emit(config, text.str(), out);
  return kSuccess;
}

namespace detail {

inline int run_sweep(const RunConfig& config, std::ostream& out, bool figure) {
  if (config.format != "csv" && config.format != "gnuplot") throw ValidationError("unknown format '" + config.format + "'");
  if (config.format == "gnuplot" && config.out.empty()) throw ValidationError("--format gnuplot needs --out <path>");
  if (config.threads == 0) throw ValidationError("--threads must be >= 1");
  const auto alpha = Alpha::parse(config.alpha);
  const auto s_list = parse_s_list(config);
  if (config.n_from == 0 || config.n_from > config.n_max) throw ValidationError("need 1 <= --n-from <= --n-max");

  RunConfig effective = config;
  if (figure) effective.seq = "sqrt";
  const auto spec = sequence_spec(effective);
  if (spec.kind != SequenceKind::file) check_precision_guard(spec.p, spec.m, s_list, config.n_max, alpha);
  const auto xs = make_sequence(spec);
  const std::size_t m = xs.front().precision();
  const std::uint32_t p = xs.front().prime();
  check_precision_guard(p, m, s_list, config.n_max, alpha);

  const auto rows = sweep(xs, alpha, s_list, config.n_from, config.n_max, config.threads);

  std::ostringstream text;
  text << metadata(effective, s_list, m, effective.seq);
  if (figure) {
    for (std::size_t i = 0; i < s_list.size(); ++i) {
      std::vector<PairCorrRow> column;
      for (std::size_t r = i; r < rows.size(); r += s_list.size()) column.push_back(rows[r]);
      text << "# jumps s=" << s_list[i].to_display() << ":";
      const auto jumps = jump_locations(column);
      for (std::size_t j = 0; j < jumps.size(); ++j) text << (j ? "," : " ") << jumps[j];
      text << "\n";
    }
  }
  text << csv_header() << '\n';
  for (const auto& row : rows) text << csv_row(row) << '\n';
  emit(config, text.str(), out);

  if (config.format == "gnuplot") {
    write_text(config.out + ".gp", gnuplot_script(config.out, s_list, p));
    out << "wrote " << config.out << " and " << config.out << ".gp\n";
  }
  return kSuccess;
}

}  // namespace detail

inline int cmd_sweep(const RunConfig& config, std::ostream& out) { return detail::run_sweep(config, out, false); }

/// F_{N,alpha,p}(s) of the transferred {sqrt n} sequence over N = 1..n_max.
inline int cmd_figure1(const RunConfig& config, std::ostream& out) { return detail::run_sweep(config, out, true); }

inline int cmd_verify(const RunConfig& config, std::ostream& out) {
  const std::uint32_t p = config.p;
  const std::size_t m = config.resolved_precision();
  require_prime(p);
  if (ipow(BigInt(p), m) > config.budget) {
    throw ValidationError("p^m = " + std::to_string(p) + "^" + std::to_string(m) + " exceeds --budget " +
                          std::to_string(config.budget));
  }

  struct Check {
    std::string name;
    std::uint64_t cases = 0;
    std::uint64_t failures = 0;
  };
  std::vector<Check> checks;
  const auto elements = ipow(BigInt(p), m).convert_to<std::uint64_t>();

  checks.push_back({"lemma-monna (i),(ii),(iii)", elements, check_lemma_monna(p, m, config.budget).size()});
  checks.push_back({"monna round trip", elements, check_monna_round_trip(p, m, config.budget).size()});

  // Exhaustive metric and ring checks at the largest precision that fits.
  constexpr std::uint64_t kTripleBudget = 10'000'000;
  std::size_t mu = m;
  while (mu > 1 && ipow(BigInt(p), 3 * std::uint64_t{mu}) > kTripleBudget) --mu;
  if (ipow(BigInt(p), 3 * std::uint64_t{mu}) <= kTripleBudget) {
    checks.push_back({"ultrametric inequality (m=" + std::to_string(mu) + ")",
                      ipow(BigInt(p), 3 * std::uint64_t{mu}).convert_to<std::uint64_t>(),
                      check_ultrametric(p, mu, kTripleBudget).size()});
  }
  std::size_t mr = m;
  while (mr > 1 && ipow(BigInt(p), 2 * std::uint64_t{mr}) > kTripleBudget) --mr;
  if (ipow(BigInt(p), 2 * std::uint64_t{mr}) <= kTripleBudget) {
    checks.push_back({"ring consistency (m=" + std::to_string(mr) + ")",
                      ipow(BigInt(p), 2 * std::uint64_t{mr}).convert_to<std::uint64_t>(),
                      check_ring_consistency(p, mr, kTripleBudget).size()});
  }

  {
    const auto xs = gen_uniform_random(200, p, m, 7);
    const auto profile = brute_pair_count_profile(xs, xs.size());
    Check check{"prefix counter = brute force", 0, 0};
    for (std::size_t k = 0; k <= m; ++k, ++check.cases) {
      if (padic_pair_count_prefix(xs, xs.size(), k) != profile[k]) ++check.failures;
    }
    checks.push_back(check);
  }
  {
    const auto xs = gen_naturals(200, p, m);
    Check check{"naturals closed form", 0, 0};
    for (std::size_t n = 1; n <= xs.size(); ++n) {
      for (std::size_t k = 0; k <= std::min<std::size_t>(5, m); ++k, ++check.cases) {
        if (naturals_closed_form(n, p, k) != padic_pair_count_prefix(xs, n, k)) ++check.failures;
      }
    }
    checks.push_back(check);
  }
  {
    const auto xs = gen_uniform_random(300, p, m, 1);
    const std::vector<ExactRational> s_list = {ExactRational::parse("0.1"), ExactRational(1), ExactRational(2)};
    Check check{"sweep = row-by-row", 0, 0};
    try {
      const auto rows = sweep(xs, Alpha(), s_list, 1, xs.size());
      for (const auto& row : rows) {
        ++check.cases;
        const auto batch = padic_pair_corr(xs, row.n, row.alpha, row.s);
        if (batch.count != row.count || batch.k != row.k) ++check.failures;
      }
      checks.push_back(check);
    } catch (const PrecisionError&) {
      // radius classes beyond m at this precision; nothing to compare
    }
  }
  {
    Check check{"bridge inequality (vdc)", 0, 0};
    const auto ys = gen_vdc(200, p);
    for (const char* s_text : {"0.1", "0.5", "1", "2"}) {
      const auto s = ExactRational::parse(s_text);
      for (std::size_t n : {10, 50, 200}) {
        if (disc_measure(p, s, n, Alpha()).k0 > m) continue;
        ++check.cases;
        const auto report = transference_diagnostic(ys, p, m, Alpha(), s, n);
        if (report.excess < 0 || !report.rescale_x.in_half_open(ExactRational::inverse_power(p, 1), 1)) {
          ++check.failures;
        }
      }
    }
    checks.push_back(check);
  }

  bool ok = true;
  out << std::left << std::setw(36) << "check" << std::setw(12) << "cases" << std::setw(18) << "counterexamples"
      << "result\n";
  for (const auto& check : checks) {
    ok = ok && check.failures == 0;
    out << std::left << std::setw(36) << check.name << std::setw(12) << check.cases << std::setw(18)
        << check.failures << (check.failures == 0 ? "pass" : "FAIL") << '\n';
  }
  out << "p=" << p << " m=" << m << ": " << (ok ? "all checks passed" : "counterexamples found") << '\n';
  return ok ? kSuccess : kCounterexample;
}

// Entry point -----------------------------------------------------------------------

/// Parses args (without the program name) and runs the selected command.
inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Truncated p-adic integers, the Monna map and Poissonian pair correlations", "padic-pc"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  RunConfig config;

  const auto add_field = [&](CLI::App* sub) {
    sub->add_option("--p", config.p, "prime base")->capture_default_str();
    sub->add_option("--precision,--m", config.precision, "stored p-adic digits (default 32; 4 for verify)");
  };
  const auto add_statistic = [&](CLI::App* sub) {
    sub->add_option("--alpha", config.alpha, "scaling exponent in (0,1], e.g. 1 or 1/2")->capture_default_str();
    sub->add_option("--s", config.s_list, "comma-separated s values, parsed exactly")
        ->delimiter(',')
        ->capture_default_str();
    sub->add_option("--threads", config.threads, "worker threads")->capture_default_str();
  };
  const auto add_sequence = [&](CLI::App* sub) {
    sub->add_option("--seq", config.seq, "sequence kind")
        ->check(CLI::IsMember({"sqrt", "vdc", "naturals", "random", "file"}))
        ->capture_default_str();
    sub->add_option("--seed", config.seed, "seed for --seq random");
    sub->add_option("--in", config.in, "sequence file for --seq file");
  };
  const auto add_n = [&](CLI::App* sub) {
    sub->add_option("--n-max,--count", config.n_max, "number of elements N")->capture_default_str();
  };
  const auto add_out = [&](CLI::App* sub) { sub->add_option("--out", config.out, "output path (default stdout)"); };
  const auto add_format = [&](CLI::App* sub) {
    sub->add_option("--format", config.format, "csv, or gnuplot for CSV plus a <out>.gp script")
        ->check(CLI::IsMember({"csv", "gnuplot"}))
        ->capture_default_str();
  };

  auto* gen = app.add_subcommand("gen", "write a sequence file");
  add_field(gen);
  add_sequence(gen);
  add_n(gen);
  add_out(gen);

  auto* stats = app.add_subcommand("stats", "pair correlation at a single N for each s");
  add_field(stats);
  add_sequence(stats);
  add_statistic(stats);
  add_n(stats);
  add_out(stats);
  stats->add_option("--statistic", config.statistic, "padic or real (of the Monna images)")
      ->check(CLI::IsMember({"padic", "real"}))
      ->capture_default_str();

  auto* sweep_cmd = app.add_subcommand("sweep", "p-adic pair correlation for every N in a range and every s");
  add_field(sweep_cmd);
  add_sequence(sweep_cmd);
  add_statistic(sweep_cmd);
  add_n(sweep_cmd);
  add_out(sweep_cmd);
  add_format(sweep_cmd);
  sweep_cmd->add_option("--n-from", config.n_from, "first N")->capture_default_str();

  auto* figure = app.add_subcommand("figure1", "F_{N,1,3}(s) of the transferred {sqrt n} sequence");
  add_field(figure);
  add_statistic(figure);
  add_n(figure);
  add_out(figure);
  add_format(figure);

  auto* verify_cmd = app.add_subcommand("verify", "exhaustive lemma checks and oracle comparisons");
  add_field(verify_cmd);
  verify_cmd->add_option("--budget", config.budget, "largest p^m to enumerate")->capture_default_str();

  std::reverse(args.begin(), args.end());
  try {
    app.parse(std::move(args));
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kValidationError;
  }

  try {
    if (*gen) config.command = "gen";
    if (*stats) config.command = "stats";
    if (*sweep_cmd) config.command = "sweep";
    if (*figure) config.command = "figure1";
    if (*verify_cmd) config.command = "verify";

    if (config.command == "gen") return cmd_gen(config, out);
    if (config.command == "stats") return cmd_stats(config, out);
    if (config.command == "sweep") return cmd_sweep(config, out);
    if (config.command == "figure1") return cmd_figure1(config, out);
    return cmd_verify(config, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kValidationError;
  }
}

}  // namespace padic::cli
