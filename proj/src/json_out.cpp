#include "qop/json_out.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace qop {

namespace {

void put_string(std::string &out, const std::string &s) {
  out += json(s).dump();  // library escaping
}

void put_number(std::string &out, double v) {
  if (!std::isfinite(v)) {
    out += "null";
    return;
  }
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out += buf;
}

void emit(std::string &out, const json &j, int indent, int depth) {
  const std::string pad = indent > 0 ? "\n" + std::string(static_cast<std::size_t>(indent) * (depth + 1), ' ') : "";
  const std::string close = indent > 0 ? "\n" + std::string(static_cast<std::size_t>(indent) * depth, ' ') : "";
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ',';
        first = false;
        out += pad;
        put_string(out, it.key());
        out += indent > 0 ? ": " : ":";
        emit(out, it.value(), indent, depth + 1);
      }
      out += close + '}';
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      // numeric leaves stay on one line
      bool flat = true;
      for (const json &x : j) flat = flat && !x.is_structured();
      if (!flat) {
        bool small = true;
        for (const json &x : j) small = small && x.is_array() && x.size() <= 2 && !x.empty() && !x[0].is_structured();
        flat = small;
      }
      out += '[';
      for (std::size_t k = 0; k < j.size(); ++k) {
        if (k) out += flat ? (indent > 0 ? ", " : ",") : ",";
        if (!flat) out += pad;
        emit(out, j[k], flat ? 0 : indent, depth + 1);
      }
      out += (flat ? "" : close) + ']';
      return;
    }
    case json::value_t::string:
      put_string(out, j.get<std::string>());
      return;
    case json::value_t::boolean:
      out += j.get<bool>() ? "true" : "false";
      return;
    case json::value_t::number_integer:
      out += std::to_string(j.get<std::int64_t>());
      return;
    case json::value_t::number_unsigned:
      out += std::to_string(j.get<std::uint64_t>());
      return;
    case json::value_t::number_float:
      put_number(out, j.get<double>());
      return;
    default:
      out += "null";
  }
}

json subset_json(const Subset &I) {
  json a = json::array();
  for (int x : I.members) a.push_back(x + 1);
  return a;
}

json poly_json(const std::vector<cplx> &c) {
  json a = json::array();
  for (const cplx &x : c) a.push_back(to_json(x));
  return a;
}

std::string occupation_key(const std::vector<int> &occ) {
  std::string s;
  for (std::size_t k = 0; k < occ.size(); ++k) s += (k ? " " : "") + std::to_string(occ[k]);
  return s;
}

}  // namespace

std::string dump_json(const json &j, int indent) {
  std::string out;
  emit(out, j, indent, 0);
  out += '\n';
  return out;
}

json to_json(cplx c) { return json::array({c.real(), c.imag()}); }

cplx complex_from_json(const json &j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2) throw std::invalid_argument("complex value must be [re, im]");
  return {j[0].get<double>(), j[1].get<double>()};
}

json operator_json(const TransferOperator &T) {
  json meta;
  meta["n"] = T.g.n;
  meta["m"] = T.g.m;
  meta["L"] = T.L;
  meta["I"] = subset_json(T.I);
  meta["z"] = to_json(T.z);
  meta["twists"] = T.twists.phi;
  json blocks = json::array();
  for (const auto &[occ, idx] : occupation_sectors(T.g, T.L)) {
    json rows = json::array();
    for (int r : idx) {
      json row = json::array();
      for (int c : idx) row.push_back(to_json(T.matrix(r, c)));
      rows.push_back(std::move(row));
    }
    json b;
    b["occupation"] = occ;
    b["matrix"] = std::move(rows);
    blocks.push_back(std::move(b));
  }
  json out;
  out["meta"] = std::move(meta);
  out["blocks"] = std::move(blocks);
  return out;
}

ImportedOperator operator_from_json(const json &j) {
  const json &meta = j.at("meta");
  ImportedOperator op;
  op.g = Grading(meta.at("n").get<int>(), meta.at("m").get<int>());
  op.L = meta.at("L").get<int>();
  std::vector<int> members;
  for (const json &x : meta.at("I")) members.push_back(x.get<int>() - 1);
  op.I = Subset(members);
  op.z = complex_from_json(meta.at("z"));
  op.twists = Twists{meta.at("twists").get<std::vector<double>>()};
  const int dim = ipow(op.g.size(), op.L);
  op.matrix = MatrixXc::Zero(dim, dim);
  const auto sectors = occupation_sectors(op.g, op.L);
  for (const json &b : j.at("blocks")) {
    const auto occ = b.at("occupation").get<std::vector<int>>();
    const auto it = sectors.find(occ);
    if (it == sectors.end()) throw std::invalid_argument("operator json: unknown occupation " + occupation_key(occ));
    const std::vector<int> &idx = it->second;
    const json &rows = b.at("matrix");
    if (rows.size() != idx.size()) throw std::invalid_argument("operator json: block size mismatch");
    for (std::size_t r = 0; r < idx.size(); ++r) {
      if (rows[r].size() != idx.size()) throw std::invalid_argument("operator json: block size mismatch");
      for (std::size_t c = 0; c < idx.size(); ++c) op.matrix(idx[r], idx[c]) = complex_from_json(rows[r][c]);
    }
  }
  return op;
}

json spectrum_json(const SpectrumReport &rep) {
  json meta;
  meta["n"] = rep.g.n;
  meta["m"] = rep.g.m;
  meta["L"] = rep.L;
  meta["twists"] = rep.twists.phi;
  json paths = json::array();
  for (std::size_t k = 0; k < rep.paths.size(); ++k) {
    json p;
    p["path"] = rep.path_summary[k].path;
    p["grading"] = rep.path_summary[k].grading;
    p["max_bethe_residual"] = rep.path_summary[k].max_residual;
    p["skipped_roots"] = rep.path_summary[k].skipped;
    p["singular_states"] = rep.path_summary[k].singular;
    paths.push_back(std::move(p));
  }
  json states = json::array();
  for (const StateReport &st : rep.states) {
    const SpectrumRecord &r = st.record;
    json s;
    s["occupation"] = r.occupation;
    s["state"] = r.state;
    s["energy"] = r.energy;
    s["path_energies"] = st.path_energies;
    s["path_bethe_residuals"] = st.path_residuals;
    json sing = json::array();
    for (int k : st.singular_paths) sing.push_back(k);
    s["singular_paths"] = std::move(sing);
    s["energy_deviation"] = st.energy_deviation;
    s["path_spread"] = st.path_spread;
    json q = json::array();
    for (const auto &[I, c] : r.poly) {
      json e;
      e["I"] = subset_json(I);
      e["degree"] = static_cast<int>(c.size()) - 1;
      e["poly"] = poly_json(c);
      e["roots"] = poly_json(r.roots.at(I));
      q.push_back(std::move(e));
    }
    s["q"] = std::move(q);
    states.push_back(std::move(s));
  }
  json out;
  out["meta"] = std::move(meta);
  out["summary"] = {{"states", rep.states.size()},
                    {"max_energy_deviation", rep.max_energy_deviation},
                    {"max_path_spread", rep.max_path_spread},
                    {"max_bethe_residual", rep.max_bethe_residual},
                    {"singular_pairs", rep.singular_pairs},
                    {"errors", rep.errors}};
  out["paths"] = std::move(paths);
  out["states"] = std::move(states);
  return out;
}

std::string spectrum_csv(const SpectrumReport &rep) {
  std::ostringstream os;
  auto num = [](double v) {
    if (!std::isfinite(v)) return std::string("nan");
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  os << "occupation,state,energy,energy_deviation,path_spread,max_bethe_residual,singular_paths";
  std::vector<Subset> subsets;
  if (!rep.states.empty())
    for (const auto &[I, c] : rep.states.front().record.poly) subsets.push_back(I);
  for (const Subset &I : subsets) {
    os << ",roots_";
    if (I.members.empty()) os << "empty";
    for (int a : I.members) os << a + 1;
  }
  os << '\n';
  for (const StateReport &st : rep.states) {
    double res = 0.0;
    for (double r : st.path_residuals) res = std::max(res, r);
    os << occupation_key(st.record.occupation) << ',' << st.record.state << ',' << num(st.record.energy) << ','
       << num(st.energy_deviation) << ',' << num(st.path_spread) << ',' << num(res) << ','
       << st.singular_paths.size();
    for (const Subset &I : subsets) os << ',' << st.record.roots.at(I).size();
    os << '\n';
  }
  return os.str();
}

}  // namespace qop
