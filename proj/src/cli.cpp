#include "anharmonic/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "anharmonic/numerics.hpp"
#include "anharmonic/operator.hpp"
#include "anharmonic/spectrum.hpp"
#include "anharmonic/wavefunction.hpp"

namespace anharmonic::cli {

namespace {

// A table cell: literal text, plus whether it is a number.
struct Cell {
  std::string text;
  bool numeric = true;
};

struct Table {
  std::vector<std::pair<std::string, Cell>> meta;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

std::size_t significant_digits(const std::string& text) {
  std::size_t count = 0;
  bool leading = true;
  for (const char ch : text) {
    if (ch == 'e' || ch == 'E') break;
    if (ch < '0' || ch > '9') continue;
    if (leading && ch == '0') continue;
    leading = false;
    ++count;
  }
  return count;
}

nlohmann::ordered_json to_json(const Cell& cell) {
  if (!cell.numeric) return cell.text;
  if (cell.text.find_first_of(".eE") == std::string::npos) {
    return std::stoll(cell.text);
  }
  // beyond what a double carries faithfully
  if (significant_digits(cell.text) > 15) return cell.text;
  return std::stod(cell.text);
}

std::string render(const Table& table, const std::string& format) {
  std::ostringstream os;
  if (format == "csv") {
    for (std::size_t i = 0; i < table.columns.size(); ++i) os << (i ? "," : "") << table.columns[i];
    os << '\n';
    for (const auto& row : table.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i].text;
      os << '\n';
    }
  } else if (format == "json") {
    nlohmann::ordered_json doc = nlohmann::ordered_json::object();
    for (const auto& [key, cell] : table.meta) doc[key] = to_json(cell);
    doc["rows"] = nlohmann::ordered_json::array();
    for (const auto& row : table.rows) {
      nlohmann::ordered_json entry = nlohmann::ordered_json::object();
      for (std::size_t i = 0; i < row.size(); ++i) entry[table.columns[i]] = to_json(row[i]);
      doc["rows"].push_back(std::move(entry));
    }
    os << doc.dump(2) << '\n';
  } else {
    for (const auto& [key, cell] : table.meta) os << key << ": " << cell.text << '\n';
    std::vector<std::size_t> width(table.columns.size());
    for (std::size_t i = 0; i < width.size(); ++i) width[i] = table.columns[i].size();
    for (const auto& row : table.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], row[i].text.size());
    }
    auto line = [&](const auto& cells, auto text_of) {
      for (std::size_t i = 0; i < cells.size(); ++i) {
        const std::string& t = text_of(cells[i]);
        if (i) os << "  ";
        os << std::string(width[i] - t.size(), ' ') << t;
      }
      os << '\n';
    };
    line(table.columns, [](const std::string& s) -> const std::string& { return s; });
    for (const auto& row : table.rows) line(row, [](const Cell& c) -> const std::string& { return c.text; });
  }
  return os.str();
}

Cell number(std::string text) { return {std::move(text), true}; }
Cell integer(std::size_t value) { return {std::to_string(value), true}; }

std::string fixed(double value, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
  return buf;
}

std::string general(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", value);
  return buf;
}

// Decimal places needed to print the points of a grid exactly.
unsigned grid_decimals(const Grid& grid) {
  unsigned places = 0;
  for (const Decimal* d : {&grid.x_min(), &grid.x_max(), &grid.step()}) {
    const std::string& t = d->text();
    if (t.find_first_of("eE") != std::string::npos) return 12;
    const auto dot = t.find('.');
    if (dot != std::string::npos) places = std::max<unsigned>(places, t.size() - dot - 1);
  }
  return places;
}

std::vector<std::size_t> parse_orders(const std::string& spec) {
  const auto dots = spec.find("..");
  if (dots == std::string::npos) throw std::invalid_argument("orders must look like a..b[:step]");
  const auto colon = spec.find(':', dots);
  auto to_size = [](const std::string& s) {
    std::size_t used = 0;
    const long long v = std::stoll(s, &used);
    if (used != s.size() || v < 0) throw std::invalid_argument("bad order '" + s + "'");
    return static_cast<std::size_t>(v);
  };
  const std::size_t first = to_size(spec.substr(0, dots));
  const std::size_t last = to_size(spec.substr(dots + 2, colon == std::string::npos ? std::string::npos
                                                                                   : colon - dots - 2));
  const std::size_t step = colon == std::string::npos ? 1 : to_size(spec.substr(colon + 1));
  if (step == 0 || last < first) throw std::invalid_argument("orders must look like a..b[:step] with a <= b");
  std::vector<std::size_t> orders;
  for (std::size_t n = first; n <= last; n += step) orders.push_back(n);
  return orders;
}

Omega0Policy parse_policy(const std::string& value) {
  if (value == "auto") return Omega0Policy::optimize();
  if (value == "formula") return Omega0Policy::formula();
  return Omega0Policy::fixed(Decimal::parse(value));
}

std::vector<std::pair<double, double>> read_fit_points(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot read " + path);
  std::string line;
  std::vector<std::pair<double, double>> points;
  bool header = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (header) {
      header = false;
      if (line != "lambda,omega0") throw std::invalid_argument("fit input header must be lambda,omega0");
      continue;
    }
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw std::invalid_argument("bad fit input line '" + line + "'");
    points.emplace_back(Decimal::parse(line.substr(0, comma)).to_double(),
                        Decimal::parse(line.substr(comma + 1)).to_double());
  }
  return points;
}

struct Options {
  std::string lambda;
  std::string omega = "1";
  std::size_t level = 0;
  std::size_t count = 1;
  unsigned digits = 8;
  std::string omega0;
  std::size_t n_max = 2000;
  std::string orders;
  std::string grid = "-5:5:0.01";
  std::size_t order = 0;
  std::string input;
  std::string format = "text";
  std::string output;
};

Table solve_table(const Options& o, std::vector<std::size_t> levels) {
  if (o.digits == 0) throw std::invalid_argument("--digits must be positive");
  SolveRequest request{ModelParams(Decimal::parse(o.lambda), Decimal::parse(o.omega))};
  request.levels = std::move(levels);
  request.target_digits = o.digits;
  request.omega0_policy = parse_policy(o.omega0);
  request.n_max = o.n_max;
  const SolveResult result = solve_levels(request);

  Table t;
  t.meta = {{"lambda", number(request.params.lambda().text())},
            {"omega", number(request.params.omega().text())},
            {"omega0", number(result.omega0_used.text())},
            {"final_order", integer(result.final_order)}};
  t.columns.push_back("N");
  std::vector<Cell> row{integer(result.final_order)};
  for (const EigenPair& pair : result.pairs) {
    t.columns.push_back("E" + std::to_string(pair.level));
    row.push_back(number(pair.value.to_fixed(o.digits)));
  }
  t.rows.push_back(std::move(row));
  return t;
}

Table converge_table(const Options& o) {
  const ModelParams params(Decimal::parse(o.lambda), Decimal::parse(o.omega));
  const Decimal omega0 = Decimal::parse(o.omega0);
  const auto rows = convergence_table(params, omega0, parse_orders(o.orders), o.level, o.digits);
  Table t;
  t.meta = {{"lambda", number(params.lambda().text())},
            {"omega", number(params.omega().text())},
            {"omega0", number(omega0.text())}};
  t.columns = {"N", "E" + std::to_string(o.level)};
  for (const auto& row : rows) t.rows.push_back({integer(row.order), number(row.energies[0].to_fixed(o.digits))});
  return t;
}

Table wavefunction_table(const Options& o) {
  const Grid grid = Grid::parse(o.grid);
  SolveRequest request{ModelParams(Decimal::parse(o.lambda), Decimal::parse(o.omega))};
  request.levels = {o.level};
  request.target_digits = o.digits;
  request.omega0_policy = parse_policy(o.omega0);
  request.n_max = o.n_max;
  const SolveResult result = solve_levels(request);
  const WaveFunction wf = make_wavefunction(result, 0);
  const PrecisionContext ctx = make_context(o.digits);

  Table t;
  t.meta = {{"lambda", number(request.params.lambda().text())},
            {"omega", number(request.params.omega().text())},
            {"omega0", number(result.omega0_used.text())},
            {"final_order", integer(result.final_order)},
            {"level", integer(o.level)},
            {"energy", number(wf.energy.to_fixed(o.digits))}};
  t.columns = {"x", "psi"};
  const unsigned places = grid_decimals(grid);
  for (const auto& [x, psi] : sample(wf, grid, ctx)) {
    t.rows.push_back({number(x.to_fixed(places)), number(psi.to_scientific(o.digits))});
  }
  return t;
}

Table potential_table(const Options& o) {
  const Grid grid = Grid::parse(o.grid);
  const ModelParams params(Decimal::parse(o.lambda), Decimal::parse(o.omega));
  const Decimal omega0 = Decimal::parse(o.omega0);
  const PotentialSeries series = sample_potential(params, omega0, grid, make_context(o.digits));
  Table t;
  t.meta = {{"lambda", number(params.lambda().text())}, {"omega0", number(omega0.text())}};
  t.columns = {"x", "harmonic", "perturbation"};
  const unsigned places = grid_decimals(grid);
  for (std::size_t i = 0; i < series.x.size(); ++i) {
    t.rows.push_back({number(series.x[i].to_fixed(places)), number(series.harmonic[i].to_fixed(o.digits)),
                      number(series.perturbation[i].to_fixed(o.digits))});
  }
  return t;
}

}  // namespace

RunResult run(const std::vector<std::string>& args) {
  RunResult result;
  Options o;
  CLI::App app{"Quartic anharmonic oscillator in a variable-frequency oscillator basis", "anharm"};
  app.require_subcommand(1);

  auto add_format = [&](CLI::App* cmd) {
    cmd->add_option("--format", o.format, "Output format")
        ->check(CLI::IsMember({"csv", "json", "text"}))
        ->capture_default_str();
    cmd->add_option("--output", o.output, "Write output to this file instead of stdout");
  };
  auto add_model = [&](CLI::App* cmd) {
    cmd->add_option("--lambda", o.lambda, "Coupling constant")->required();
    cmd->add_option("--omega", o.omega, "Oscillator frequency")->capture_default_str();
    cmd->add_option("--digits", o.digits, "Decimal digits of the energies")->capture_default_str();
  };

  auto* energy = app.add_subcommand("energy", "Energy of one level");
  add_model(energy);
  energy->add_option("--level", o.level, "Level index")->capture_default_str();
  energy->add_option("--omega0", o.omega0, "auto, formula or a value")->default_str("formula");
  energy->add_option("--n-max", o.n_max, "Largest order tried")->capture_default_str();
  add_format(energy);

  auto* levels = app.add_subcommand("levels", "Energies of levels 0..count-1");
  add_model(levels);
  levels->add_option("--count", o.count, "Number of levels")->required()->check(CLI::PositiveNumber);
  levels->add_option("--omega0", o.omega0, "auto, formula or a value")->default_str("formula");
  levels->add_option("--n-max", o.n_max, "Largest order tried")->capture_default_str();
  add_format(levels);

  auto* converge = app.add_subcommand("converge", "Energy at a range of orders");
  add_model(converge);
  converge->add_option("--orders", o.orders, "a..b[:step]")->required();
  converge->add_option("--omega0", o.omega0, "Basis frequency")->default_str("1");
  converge->add_option("--level", o.level, "Level index")->capture_default_str();
  add_format(converge);

  auto* wave = app.add_subcommand("wavefunction", "Sampled eigenfunction");
  add_model(wave);
  wave->add_option("--level", o.level, "Level index")->required();
  wave->add_option("--x", o.grid, "min:max:step")->capture_default_str();
  wave->add_option("--omega0", o.omega0, "auto, formula or a value")->default_str("formula");
  wave->add_option("--n-max", o.n_max, "Largest order tried")->capture_default_str();
  add_format(wave);

  auto* potential = app.add_subcommand("potential", "Harmonic and quartic parts of the potential");
  add_model(potential);
  potential->add_option("--omega0", o.omega0, "Basis frequency")->required();
  potential->add_option("--x", o.grid, "min:max:step")->required();
  add_format(potential);

  auto* omega0 = app.add_subcommand("omega0", "Basis frequency tools");
  omega0->require_subcommand(1);
  auto* predict = omega0->add_subcommand("predict", "Formula value");
  predict->add_option("--lambda", o.lambda, "Coupling constant")->required();
  predict->add_option("--omega", o.omega, "Oscillator frequency")->capture_default_str();
  add_format(predict);
  auto* optimize = omega0->add_subcommand("optimize", "Variational optimum at a fixed order");
  add_model(optimize);
  optimize->add_option("--order", o.order, "Truncation order")->required();
  optimize->add_option("--level", o.level, "Level index")->capture_default_str();
  add_format(optimize);
  auto* fit = omega0->add_subcommand("fit", "Fit the formula to lambda,omega0 data");
  fit->add_option("--input", o.input, "CSV with header lambda,omega0")->required();
  add_format(fit);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    result.out = (app.get_subcommands().empty() ? &app : app.get_subcommands().back())->help();
    return result;
  } catch (const CLI::ParseError& e) {
    result.exit_code = 2;
    result.err = std::string(e.what()) + "\n" + app.help();
    return result;
  }

  if (o.omega0.empty()) o.omega0 = converge->parsed() ? "1" : "formula";

  try {
    Table table;
    if (energy->parsed()) {
      table = solve_table(o, {o.level});
    } else if (levels->parsed()) {
      std::vector<std::size_t> all(o.count);
      for (std::size_t i = 0; i < o.count; ++i) all[i] = i;
      table = solve_table(o, std::move(all));
    } else if (converge->parsed()) {
      table = converge_table(o);
    } else if (wave->parsed()) {
      table = wavefunction_table(o);
    } else if (potential->parsed()) {
      table = potential_table(o);
    } else if (predict->parsed()) {
      const ModelParams params(Decimal::parse(o.lambda), Decimal::parse(o.omega));
      if (params.lambda().sign() == 0) throw std::domain_error("omega0 prediction needs lambda > 0");
      table.columns = {"lambda", "omega0"};
      table.rows.push_back({number(params.lambda().text()), number(fixed(predict_omega0(params), 6))});
    } else if (optimize->parsed()) {
      const ModelParams params(Decimal::parse(o.lambda), Decimal::parse(o.omega));
      const PrecisionContext ctx = make_context(o.digits);
      const double best = optimize_omega0(params, o.order, o.level, ctx);
      const auto rows = convergence_table(params, Decimal(best), {o.order}, o.level, o.digits);
      table.meta = {{"lambda", number(params.lambda().text())}, {"order", integer(o.order)}};
      table.columns = {"omega0", "E" + std::to_string(o.level)};
      table.rows.push_back({number(fixed(best, 4)), number(rows[0].energies[0].to_fixed(o.digits))});
    } else if (fit->parsed()) {
      const auto points = read_fit_points(o.input);
      const Omega0Model model = fit_omega0_model(points);
      table.columns = {"a", "b", "c", "alpha", "sse"};
      table.rows.push_back({number(general(model.a)), number(general(model.b)), number(general(model.c)),
                            number(general(model.alpha)), number(general(omega0_model_sse(model, points)))});
    }

    const std::string rendered = render(table, o.format);
    if (o.output.empty()) {
      result.out = rendered;
    } else {
      std::ofstream file(o.output, std::ios::binary);
      if (!file) throw std::invalid_argument("cannot write " + o.output);
      file << rendered;
    }
  } catch (const ConvergenceError& e) {
    result.exit_code = 1;
    std::ostringstream os;
    os << "error: " << e.what() << '\n';
    for (const auto& row : e.last_rows()) {
      os << "  N=" << row.order;
      for (const Real& value : row.energies) os << ' ' << value.to_fixed(o.digits);
      os << '\n';
    }
    result.err = os.str();
  } catch (const std::exception& e) {
    result.exit_code = 2;
    result.err = std::string("error: ") + e.what() + '\n';
  }
  return result;
}

}  // namespace anharmonic::cli
