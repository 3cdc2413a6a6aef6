#include "crossmax/report.hpp"

#include <charconv>
#include <chrono>
#include <sstream>

namespace crossmax {

using nlohmann::json;

std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) throw Error("format_double: conversion failed");
  return std::string(buf, ptr);
}

namespace {

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Verified: return "VERIFIED";
    case Verdict::HypothesesUnmet: return "HYPOTHESES-UNMET";
    case Verdict::InternalError: return "INTERNAL-ERROR";
  }
  return "UNKNOWN";
}

}  // namespace

json report_body(const VerificationReport& rep) {
  json hyps = json::array();
  for (const auto& h : rep.hypotheses)
    hyps.push_back({{"name", h.name},
                    {"pass", h.pass},
                    {"margin", h.margin},
                    {"detail", h.detail}});
  json body = {
      {"kind", "verification"},
      {"theorem", theorem_name(rep.theorem)},
      {"verdict", verdict_name(rep.verdict)},
      {"hypotheses", hyps},
      {"k_used", rep.k_used},
      {"kappa_used", rep.kappa_used},
      {"k_auto", rep.k_auto},
      {"solve_ok", rep.solve_ok},
      {"solution_positive", rep.solution_positive},
      {"min_component", rep.min_component},
      {"min_component_index", rep.min_component_index},
      {"min_node", rep.min_node},
      {"counterexample_confirmed", rep.counterexample_confirmed},
  };
  if (rep.lambda1 != 0.0) body["lambda1"] = rep.lambda1;
  if (!rep.error_message.empty()) body["error"] = rep.error_message;
  return body;
}

json report_body(const CounterexampleResult& res) {
  json body = {
      {"kind", "counterexample"},
      {"name", res.name},
      {"parameters", res.parameters},
      {"rhs_margin", res.rhs_margin},
      {"witness",
       {{"component", res.witness_component},
        {"node", res.witness_node},
        {"value", res.witness_value}}},
      {"expectation_met", res.expectation_met},
      {"precondition_ok", res.precondition_ok},
  };
  if (!res.failing_hypothesis.empty()) body["failing_hypothesis"] = res.failing_hypothesis;
  if (!res.detail.empty()) body["detail"] = res.detail;
  if (!res.notes.empty()) body["notes"] = res.notes;
  return body;
}

std::string render_report(const json& body) {
  auto now = std::chrono::system_clock::now();
  auto secs = std::chrono::duration_cast<std::chrono::seconds>(now.time_since_epoch());
  json doc = {
      {"schema_version", "1.0"},
      {"report", body},
      {"metadata", {{"generated_at_unix", secs.count()}}},
  };
  return doc.dump(2) + "\n";
}

std::string field_csv(const VectorField& W) {
  const Grid& g = W[0].grid;
  std::ostringstream out;
  out << "x";
  if (g.dim == 2) out << ",y";
  for (int c = 0; c < W.m(); ++c) out << ",w" << (c + 1);
  out << "\n";
  for (int node = 0; node < g.node_count(); ++node) {
    out << format_double(g.x_of(node));
    if (g.dim == 2) out << "," << format_double(g.y_of(node));
    for (int c = 0; c < W.m(); ++c) out << "," << format_double(W[c][node]);
    out << "\n";
  }
  return out.str();
}

std::string field_csv(const ScalarField& f) {
  VectorField W(1, f.grid);
  W[0] = f;
  return field_csv(W);
}

VectorField parse_field_csv(const std::string& text, const Grid& grid) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw Error("parse_field_csv: empty document");
  int coord_cols = grid.dim;
  int cols = 1;
  for (char ch : line)
    if (ch == ',') ++cols;
  int m = cols - coord_cols;
  if (m < 1) throw Error("parse_field_csv: no component columns");
  VectorField W(m, grid);
  int node = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (node >= grid.node_count()) throw Error("parse_field_csv: too many rows");
    std::istringstream ls(line);
    std::string cell;
    for (int c = 0; c < cols; ++c) {
      if (!std::getline(ls, cell, ',')) throw Error("parse_field_csv: short row");
      if (c >= coord_cols) {
        double v;
        auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
        if (res.ec != std::errc()) throw Error("parse_field_csv: bad number '" + cell + "'");
        W[c - coord_cols][node] = v;
      }
    }
    ++node;
  }
  if (node != grid.node_count()) throw Error("parse_field_csv: row count mismatch");
  return W;
}

}  // namespace crossmax
