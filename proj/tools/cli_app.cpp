#include "cli_app.hpp"

#include <CLI11.hpp>

#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <numbers>
#include <sstream>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include <json.hpp>

#include "gaussmem/capacity.hpp"
#include "gaussmem/errors.hpp"
#include "gaussmem/memory_model.hpp"
#include "gaussmem/numerics.hpp"
#include "gaussmem/spectrum.hpp"
#include "gaussmem/waterfill.hpp"

namespace gaussmem::cli {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

using Cell = std::variant<double, std::string>;

struct Table {
  std::string command;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

// 12 significant digits; infinities become the literal token "inf".
std::string format_number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

void write_csv(const Table& table, std::ostream& out) {
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    out << (i ? "," : "") << table.columns[i];
  }
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ',';
      if (const double* num = std::get_if<double>(&row[i])) {
        out << format_number(*num);
      } else {
        out << std::get<std::string>(row[i]);
      }
    }
    out << '\n';
  }
}

void write_json(const Table& table, std::ostream& out) {
  nlohmann::json doc;
  doc["command"] = table.command;
  doc["columns"] = table.columns;
  auto& rows = doc["rows"] = nlohmann::json::array();
  for (const auto& row : table.rows) {
    nlohmann::json jrow = nlohmann::json::array();
    for (const auto& cell : row) {
      if (const double* num = std::get_if<double>(&cell)) {
        if (std::isfinite(*num)) {
          jrow.push_back(*num);
        } else {
          jrow.push_back(*num > 0 ? "inf" : "-inf");  // JSON has no infinities
        }
      } else {
        jrow.push_back(std::get<std::string>(cell));
      }
    }
    rows.push_back(std::move(jrow));
  }
  out << doc.dump(2) << '\n';
}

struct OutputOptions {
  std::string format = "csv";
  std::string path;
};

void emit(const Table& table, const OutputOptions& opts, std::ostream& out) {
  if (!opts.path.empty()) {
    std::ofstream file(opts.path);
    if (!file) throw std::runtime_error("cannot open output file: " + opts.path);
    opts.format == "json" ? write_json(table, file) : write_csv(table, file);
    return;
  }
  opts.format == "json" ? write_json(table, out) : write_csv(table, out);
}

const char* method_name(CapacityMethod m) {
  switch (m) {
    case CapacityMethod::Integral: return "integral";
    case CapacityMethod::SpecialCase: return "special_case";
    case CapacityMethod::AdditiveLimit: return "additive_limit";
  }
  return "unknown";
}

std::vector<std::string> split_list(const std::string& csv) {
  std::vector<std::string> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

// Evaluates one grid point of a sweep; returns the rows it contributes.
using PointFn = std::function<std::vector<std::vector<Cell>>(double)>;

std::vector<std::vector<Cell>> run_pool(const std::vector<double>& grid, std::size_t threads,
                                        const PointFn& fn) {
  std::vector<std::vector<std::vector<Cell>>> per_point(grid.size());
  std::atomic<std::size_t> cursor{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;

  auto work = [&] {
    for (;;) {
      const std::size_t i = cursor.fetch_add(1);
      if (i >= grid.size()) return;
      try {
        per_point[i] = fn(grid[i]);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };

  const std::size_t pool = std::max<std::size_t>(
      1, std::min<std::size_t>(threads ? threads : std::thread::hardware_concurrency(),
                               grid.size()));
  std::vector<std::thread> workers;
  for (std::size_t t = 0; t < pool; ++t) workers.emplace_back(work);
  for (auto& w : workers) w.join();
  if (first_error) std::rethrow_exception(first_error);

  // rows emitted in grid order regardless of completion order
  std::vector<std::vector<Cell>> rows;
  for (auto& point : per_point) {
    for (auto& row : point) rows.push_back(std::move(row));
  }
  return rows;
}

struct CommonFlags {
  double kappa = 1.0;
  double mu = 0.0;
  double nbar = 0.0;
  double energy = 0.0;
  double tol = 1e-11;
  std::size_t points = 257;
  OutputOptions output;
};

void add_output_flags(CLI::App* sub, CommonFlags& flags) {
  sub->add_option("--format", flags.output.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  sub->add_option("--out", flags.output.path, "Write output to a file instead of stdout");
  sub->set_config("--config", "", "Flat key=value file mirroring the flags");
  sub->allow_config_extras(false);
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Classical capacity of Gaussian thermal memory channels"};
  app.require_subcommand(1);

  CommonFlags c;

  // ---- capacity -----------------------------------------------------------
  auto* cap = app.add_subcommand("capacity", "Asymptotic classical capacity (nats per use)");
  cap->add_option("--kappa", c.kappa, "Transmissivity/gain")->required();
  cap->add_option("--mu", c.mu, "Memory transmissivity")->required();
  cap->add_option("--nbar", c.nbar, "Environment mean photon number")->capture_default_str();
  cap->add_option("--energy", c.energy, "Mean input energy per use")->required();
  cap->add_option("--tol", c.tol, "Capacity quadrature tolerance")->capture_default_str();
  add_output_flags(cap, c);

  // ---- spectrum -----------------------------------------------------------
  std::size_t spectrum_n = 0;
  auto* spec = app.add_subcommand(
      "spectrum", "Asymptotic symbol eta(z), or the finite-n spectrum with --n");
  spec->add_option("--kappa", c.kappa, "Transmissivity/gain")->required();
  spec->add_option("--mu", c.mu, "Memory transmissivity")->required();
  spec->add_option("--n", spectrum_n, "Number of channel uses (finite spectrum)");
  spec->add_option("--points", c.points, "Samples of the asymptotic curve")
      ->capture_default_str();
  add_output_flags(spec, c);

  // ---- waterfill ----------------------------------------------------------
  bool summary = false;
  auto* wf = app.add_subcommand("waterfill", "Optimal input-energy distribution N(z)");
  wf->add_option("--kappa", c.kappa, "Transmissivity/gain")->required();
  wf->add_option("--mu", c.mu, "Memory transmissivity")->required();
  wf->add_option("--nbar", c.nbar, "Environment mean photon number")->capture_default_str();
  wf->add_option("--energy", c.energy, "Mean input energy per use")->required();
  wf->add_option("--points", c.points, "Curve samples")->capture_default_str();
  wf->add_flag("--summary", summary, "One row: lambda, z0, z0 fraction, energy residual");
  add_output_flags(wf, c);

  // ---- simulate -----------------------------------------------------------
  std::size_t simulate_n = 0;
  std::string check;
  auto* sim = app.add_subcommand(
      "simulate", "Run the mode-coefficient recursion for n uses");
  sim->add_option("--kappa", c.kappa, "Transmissivity/gain")->required();
  sim->add_option("--mu", c.mu, "Memory transmissivity")->required();
  sim->add_option("--n", simulate_n, "Number of channel uses")->required();
  sim->add_option("--check", check, "closed-form: compare A A^T with M^(n)")
      ->check(CLI::IsMember({"closed-form"}));
  add_output_flags(sim, c);

  // ---- additive -----------------------------------------------------------
  double n_c = 0.0;
  auto* add = app.add_subcommand("additive",
                                 "Correlated additive-noise channel capacity");
  add->add_option("--mu", c.mu, "Memory transmissivity")->required();
  add->add_option("--nc", n_c, "Added classical noise N_C")->required();
  add->add_option("--energy", c.energy, "Mean input energy per use")->required();
  add_output_flags(add, c);

  // ---- sweep ---------------------------------------------------------------
  std::string var, quantity = "capacity";
  double from = 0.0, to = 1.0;
  std::size_t steps = 0, threads = 0, sweep_n = 0;
  auto* sweep = app.add_subcommand("sweep", "Evaluate quantities over a parameter grid");
  sweep->add_option("--var", var, "Swept variable")
      ->check(CLI::IsMember({"nbar", "kappa", "mu", "energy", "n_uses"}))
      ->required();
  sweep->add_option("--from", from, "Grid start")->required();
  sweep->add_option("--to", to, "Grid stop")->required();
  sweep->add_option("--steps", steps, "Grid size (>= 2)")->required();
  sweep->add_option("--quantity", quantity,
                    "Comma-separated: capacity, z0_fraction, e_crit, n_crit, n_of_z, spectrum")
      ->capture_default_str();
  sweep->add_option("--kappa", c.kappa, "Fixed transmissivity/gain")->capture_default_str();
  sweep->add_option("--mu", c.mu, "Fixed memory transmissivity")->capture_default_str();
  sweep->add_option("--nbar", c.nbar, "Fixed environment photons")->capture_default_str();
  sweep->add_option("--energy", c.energy, "Fixed input energy")->capture_default_str();
  sweep->add_option("--n", sweep_n, "Channel uses for the spectrum quantity");
  sweep->add_option("--points", c.points, "Samples per grid point for n_of_z")
      ->capture_default_str();
  sweep->add_option("--threads", threads, "Worker threads (default: hardware)");
  sweep->add_option("--tol", c.tol, "Capacity quadrature tolerance")->capture_default_str();
  add_output_flags(sweep, c);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return 64;
  }

  try {
    Table table;

    if (cap->parsed()) {
      table.command = "capacity";
      table.columns = {"kappa", "mu", "nbar", "energy", "capacity_nats",
                       "quadrature_error", "method"};
      const auto r = asymptotic_capacity({c.kappa, c.mu, c.nbar}, c.energy, c.tol);
      table.rows.push_back({c.kappa, c.mu, c.nbar, c.energy, r.nats_per_use,
                            r.quadrature_error, std::string(method_name(r.method))});
    } else if (spec->parsed()) {
      table.command = "spectrum";
      const ChannelParams p{c.kappa, c.mu, c.nbar};
      if (spectrum_n > 0) {
        table.columns = {"j", "eta_j", "divergent"};
        const auto s = finite_spectrum(p, spectrum_n);
        for (std::size_t j = 0; j < s.eigenvalues.size(); ++j) {
          const bool div = s.divergent && j == s.divergent->index;
          table.rows.push_back(
              {static_cast<double>(j + 1), s.eigenvalues[j], div ? 1.0 : 0.0});
        }
      } else {
        if (c.points < 2) throw std::domain_error("spectrum: --points must be >= 2");
        table.columns = {"z", "eta"};
        for (std::size_t i = 0; i < c.points; ++i) {
          const double z = kTwoPi * static_cast<double>(i) / (c.points - 1);
          table.rows.push_back({z, eta_of_z(p, z)});
        }
      }
    } else if (wf->parsed()) {
      table.command = "waterfill";
      const ChannelParams p{c.kappa, c.mu, c.nbar};
      const auto dist = optimal_distribution(p, c.energy);
      if (summary) {
        table.columns = {"lambda", "z0", "z0_fraction", "energy", "energy_residual"};
        table.rows.push_back(
            {dist.lambda, dist.z0, dist.z0 / kTwoPi, dist.energy, dist.energy_residual});
      } else {
        if (c.points < 2) throw std::domain_error("waterfill: --points must be >= 2");
        table.columns = {"z", "eta", "n_of_z"};
        for (std::size_t i = 0; i < c.points; ++i) {
          const double z = kTwoPi * static_cast<double>(i) / (c.points - 1);
          table.rows.push_back({z, eta_of_z(p, z), dist(z)});
        }
      }
    } else if (sim->parsed()) {
      table.command = "simulate";
      const ChannelParams p{c.kappa, c.mu, c.nbar};
      const auto transform = build_mode_transform(p, simulate_n);
      if (check == "closed-form") {
        table.columns = {"n", "max_abs_diff", "max_scaled_diff", "bogoliubov_abs",
                         "bogoliubov_scaled", "pass"};
        const Matrix product = gram(transform.a_matrix);
        const Matrix m = closed_form_m(p, simulate_n);
        Matrix bog = product;
        const Matrix ee = gram(transform.e_matrix);
        const double sign = c.kappa > 1.0 ? -1.0 : 1.0;
        for (std::size_t i = 0; i < simulate_n; ++i)
          for (std::size_t j = 0; j < simulate_n; ++j) bog(i, j) += sign * ee(i, j);
        const double abs_diff = max_abs_diff(product, m);
        const double scaled_diff = max_scaled_diff(product, m);
        const double bog_abs = max_abs_diff(bog, identity(simulate_n));
        const double bog_scaled = max_scaled_diff(bog, identity(simulate_n));
        const bool pass = scaled_diff < 1e-10 && bog_scaled < 1e-10;
        table.rows.push_back({static_cast<double>(simulate_n), abs_diff, scaled_diff,
                              bog_abs, bog_scaled, pass ? 1.0 : 0.0});
      } else {
        table.columns = {"j", "eta_j"};
        const auto ev = detail::sym_eigenvalues_dense(gram(transform.a_matrix));
        for (std::size_t j = 0; j < ev.size(); ++j) {
          table.rows.push_back({static_cast<double>(j + 1), ev[j]});
        }
      }
    } else if (add->parsed()) {
      table.command = "additive";
      table.columns = {"mu", "nc", "energy", "capacity_nats", "single_mode_bound"};
      const double cap_value = additive_capacity(c.mu, n_c, c.energy);
      const double bound = g(c.energy + n_c) - g(n_c);
      table.rows.push_back({c.mu, n_c, c.energy, cap_value, bound});
    } else if (sweep->parsed()) {
      table.command = "sweep";
      if (steps < 2) throw std::domain_error("sweep: --steps must be >= 2");
      if (!(from < to)) throw std::domain_error("sweep: need --from < --to");
      const auto quantities = split_list(quantity);
      if (quantities.empty()) throw std::domain_error("sweep: empty --quantity");

      const bool vector_quantity =
          quantities.size() == 1 && (quantities[0] == "n_of_z" || quantities[0] == "spectrum");
      for (const auto& q : quantities) {
        if (q != "capacity" && q != "z0_fraction" && q != "e_crit" && q != "n_crit" &&
            q != "n_of_z" && q != "spectrum") {
          throw std::domain_error("sweep: unknown quantity '" + q + "'");
        }
        if ((q == "n_of_z" || q == "spectrum") && !vector_quantity) {
          throw std::domain_error("sweep: vector quantities cannot be combined");
        }
      }

      std::vector<double> grid(steps);
      for (std::size_t i = 0; i < steps; ++i) {
        grid[i] = from + (to - from) * static_cast<double>(i) / (steps - 1);
      }

      const auto params_at = [&](double v) {
        ChannelParams p{c.kappa, c.mu, c.nbar};
        double energy = c.energy;
        if (var == "nbar") p.nbar = v;
        if (var == "kappa") p.kappa = v;
        if (var == "mu") p.mu = v;
        if (var == "energy") energy = v;
        return std::pair<ChannelParams, double>(p, energy);
      };

      PointFn point;
      if (vector_quantity && quantities[0] == "n_of_z") {
        table.columns = {var, "z", "n_of_z"};
        point = [&](double v) {
          const auto [p, energy] = params_at(v);
          const auto dist = optimal_distribution(p, energy);
          std::vector<std::vector<Cell>> rows;
          for (std::size_t i = 0; i < c.points; ++i) {
            const double z = kTwoPi * static_cast<double>(i) / (c.points - 1);
            rows.push_back({v, z, dist(z)});
          }
          return rows;
        };
      } else if (vector_quantity) {  // spectrum
        table.columns = {var, "j", "eta_j"};
        if (var != "n_uses" && sweep_n == 0) {
          throw std::domain_error("sweep: the spectrum quantity needs --n");
        }
        point = [&](double v) {
          const auto [p, energy] = params_at(v);
          (void)energy;
          const std::size_t n =
              var == "n_uses" ? static_cast<std::size_t>(std::llround(v)) : sweep_n;
          const auto s = finite_spectrum(p, n);
          std::vector<std::vector<Cell>> rows;
          for (std::size_t j = 0; j < s.eigenvalues.size(); ++j) {
            rows.push_back({v, static_cast<double>(j + 1), s.eigenvalues[j]});
          }
          return rows;
        };
      } else {
        table.columns = {var};
        for (const auto& q : quantities) {
          table.columns.push_back(q == "capacity" ? "capacity_nats"
                                  : q == "e_crit" ? "e_crit_photons"
                                  : q == "n_crit" ? "n_crit_photons"
                                                  : q);
        }
        point = [&](double v) {
          const auto [p, energy] = params_at(v);
          std::vector<Cell> row{v};
          for (const auto& q : quantities) {
            if (q == "capacity") {
              row.push_back(asymptotic_capacity(p, energy, c.tol).nats_per_use);
            } else if (q == "z0_fraction") {
              row.push_back(optimal_distribution(p, energy).z0 / kTwoPi);
            } else if (q == "e_crit") {
              row.push_back(critical_energy(p));
            } else {
              row.push_back(critical_temperature(p.kappa, p.mu, energy));
            }
          }
          return std::vector<std::vector<Cell>>{std::move(row)};
        };
      }

      table.rows = run_pool(grid, threads, point);
    }

    emit(table, c.output, out);
    return 0;
  } catch (const std::domain_error& e) {
    err << "domain error: " << e.what() << '\n';
    return 1;
  } catch (const resource_error& e) {
    err << "resource error: " << e.what() << '\n';
    return 2;
  } catch (const solver_error& e) {
    err << "solver failure: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace gaussmem::cli
