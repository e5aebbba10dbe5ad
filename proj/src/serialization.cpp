#include "statedeg/serialization.hpp"

#include <algorithm>
#include <cmath>
#include <regex>

namespace statedeg {

namespace {

[[noreturn]] void field_error(const std::string& path, const std::string& what) {
  throw ParseError("field '" + path + "': " + what);
}

const Json& require_field(const Json& j, const std::string& key,
                          const std::string& path) {
  if (!j.is_object())
    field_error(path, "expected an object");
  const auto it = j.find(key);
  if (it == j.end())
    field_error(path.empty() ? key : path + "." + key, "missing");
  return *it;
}

Index read_dim(const Json& j, const std::string& path) {
  if (!j.is_number_integer() || j.get<long long>() < 1)
    field_error(path, "expected a positive integer");
  return static_cast<Index>(j.get<long long>());
}

Complex read_complex(const Json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    field_error(path, "expected a [re, im] pair of numbers");
  const Complex z(j[0].get<double>(), j[1].get<double>());
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
    field_error(path, "non-finite number");
  return z;
}

ComplexMatrix read_matrix(const Json& j, Index rows, Index cols,
                          const std::string& path) {
  if (!j.is_array() || static_cast<Index>(j.size()) != rows)
    field_error(path, "expected " + std::to_string(rows) + " rows");
  ComplexMatrix m(rows, cols);
  for (Index r = 0; r < rows; ++r) {
    const Json& row = j[static_cast<std::size_t>(r)];
    const std::string rp = path + "[" + std::to_string(r) + "]";
    if (!row.is_array() || static_cast<Index>(row.size()) != cols)
      field_error(rp, "expected " + std::to_string(cols) + " entries");
    for (Index c = 0; c < cols; ++c)
      m(r, c) = read_complex(row[static_cast<std::size_t>(c)],
                             rp + "[" + std::to_string(c) + "]");
  }
  return m;
}

Json index_list(const std::vector<Index>& idx) {
  Json a = Json::array();
  for (Index i : idx)
    a.push_back(i);
  return a;
}

} // namespace

Json complex_to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Json matrix_to_json(const ComplexMatrix& m) {
  Json rows = Json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Index c = 0; c < m.cols(); ++c)
      row.push_back(complex_to_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json state_to_json(const TripartiteState& state) {
  const Dims& d = state.dims();
  Json j;
  j["dims"] = Json::array({d.n, d.p, d.q});
  Json amps = Json::array();
  for (Index i = 0; i < state.amplitudes().size(); ++i)
    amps.push_back(complex_to_json(state.amplitudes()(i)));
  j["amplitudes"] = std::move(amps);
  return j;
}

TripartiteState state_from_json(const Json& j) {
  const Json& dims = require_field(j, "dims", "");
  if (!dims.is_array() || dims.size() != 3)
    field_error("dims", "expected [n, p, q]");
  const Dims d{read_dim(dims[0], "dims[0]"), read_dim(dims[1], "dims[1]"),
               read_dim(dims[2], "dims[2]")};
  const Json& amps = require_field(j, "amplitudes", "");
  if (!amps.is_array())
    field_error("amplitudes", "expected an array");
  if (static_cast<Index>(amps.size()) != d.total())
    field_error("amplitudes", "has " + std::to_string(amps.size()) +
                                  " entries, dims require " +
                                  std::to_string(d.total()));
  ComplexVector x(d.total());
  for (Index i = 0; i < d.total(); ++i)
    x(i) = read_complex(amps[static_cast<std::size_t>(i)],
                        "amplitudes[" + std::to_string(i) + "]");
  if (x.squaredNorm() == 0.0)
    field_error("amplitudes", "state vector is zero");
  return TripartiteState(d, x, false);
}

Json kraus_to_json(const KrausSet& k) {
  Json j;
  j["in_dim"] = k.in_dim();
  j["out_dim"] = k.out_dim();
  Json ops = Json::array();
  for (const auto& f : k.ops)
    ops.push_back(matrix_to_json(f));
  j["kraus"] = std::move(ops);
  return j;
}

KrausSet kraus_from_json(const Json& j) {
  const Index in = read_dim(require_field(j, "in_dim", ""), "in_dim");
  const Index out = read_dim(require_field(j, "out_dim", ""), "out_dim");
  const Json& ops = require_field(j, "kraus", "");
  if (!ops.is_array() || ops.empty())
    field_error("kraus", "expected a non-empty array of matrices");
  KrausSet k;
  for (std::size_t i = 0; i < ops.size(); ++i)
    k.ops.push_back(
        read_matrix(ops[i], out, in, "kraus[" + std::to_string(i) + "]"));
  return k;
}

Json parse_json(const std::string& text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    // The byte offset is ambiguous at end of input, so prefer the parser's
    // own "at line N" when present.
    static const std::regex at_line(R"(at line (\d+))");
    std::cmatch m;
    std::string line;
    if (std::regex_search(e.what(), m, at_line)) {
      line = m[1].str();
    } else {
      const std::size_t byte = std::min<std::size_t>(e.byte, text.size());
      line = std::to_string(
          1 + std::count(text.begin(),
                         text.begin() + static_cast<std::ptrdiff_t>(
                                            byte > 0 ? byte - 1 : 0),
                         '\n'));
    }
    throw ParseError(source + ":" + line + ": JSON syntax error: " + e.what());
  }
}

Json outcome_to_json(const FeasibilityOutcome& o, Direction direction) {
  Json j;
  j["direction"] = to_string(direction);
  j["status"] = to_string(o.status);
  j["stage"] = to_string(o.stage);
  j["cause"] = o.cause;
  j["residual_affine"] = o.residual_affine;
  j["residual_psd"] = o.residual_psd;
  j["iterations"] = o.iterations;
  j["polished"] = o.polished;
  if (o.verification_residual >= 0.0)
    j["verification_residual"] = o.verification_residual;
  if (o.tp_defect >= 0.0)
    j["tp_defect"] = o.tp_defect;
  if (o.certificate && o.status == Status::Feasible)
    j["certificate"] = kraus_to_json(*o.certificate);
  if (o.filter_witness) {
    Json w;
    w["kind"] = to_string(o.filter_witness->kind);
    w["coefficients"] = matrix_to_json(o.filter_witness->coefficients);
    w["d_in"] = o.filter_witness->d_in;
    w["d_out"] = o.filter_witness->d_out;
    j["filter_witness"] = std::move(w);
  }
  if (!o.obstruction.empty()) {
    Json ob;
    ob["indices"] = index_list(o.obstruction);
    ob["eigenvalue"] = o.obstruction_eigenvalue;
    j["obstruction"] = std::move(ob);
  }
  return j;
}

Json config_to_json(const DecideConfig& c) {
  Json j;
  j["max_iter"] = c.solver.max_iter;
  j["feas_tol"] = c.solver.feas_tol;
  j["psd_tol"] = c.solver.psd_tol;
  j["stall_window"] = c.solver.stall_window;
  j["stall_tol"] = c.solver.stall_tol;
  j["verify_tol"] = c.solver.verify_tol;
  j["rank_tol"] = c.solver.rank_tol;
  j["row_tol"] = c.solver.row_tol;
  j["polish"] = c.solver.polish;
  j["slack_tol"] = c.filter.slack_tol;
  j["witnesses"] = c.witnesses;
  j["seed"] = c.seed;
  j["rank_one"] = c.use_rank_one;
  j["pairs"] =
      c.selection == PairSelection::All ? "all" : "diagonal_only";
  return j;
}

Json channel_report_to_json(const ChannelReport& r) {
  Json j;
  j["verdict"] = to_string(r.verdict);
  j["anti_degradable"] = r.anti_degradable;
  j["degradable"] = r.degradable;
  j["scope"] = r.scope;
  j["results"] = Json::array({outcome_to_json(r.e_to_b, Direction::EtoB),
                              outcome_to_json(r.b_to_e, Direction::BtoE)});
  return j;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

} // namespace statedeg
