#include "cyclekit/io.hpp"

#include <charconv>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "json.hpp"

namespace cyclekit {

using nlohmann::json;

namespace {

json big_to_json(const BigInt& v) {
  if (mpz_fits_slong_p(v.get_mpz_t())) return json(v.get_si());
  return json(to_string(v));
}

BigInt big_from_json(const json& j, std::string_view what) {
  if (j.is_number_integer()) {
    return j.is_number_unsigned() ? BigInt(std::to_string(j.get<std::uint64_t>()))
                                  : BigInt(static_cast<long>(j.get<std::int64_t>()));
  }
  if (j.is_string()) {
    if (auto v = parse_bigint(j.get<std::string>())) return *v;
  }
  throw IoError(std::string(what) + ": expected an integer, got " + j.dump());
}

json counts_to_json(const BranchCounts& c) { return json(c.counts); }

BranchCounts counts_from_json(const json& j) {
  if (!j.is_array()) throw IoError("counts: expected an array");
  BranchCounts out;
  for (const auto& v : j) {
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
      throw IoError("counts: expected non-negative integers");
    }
    out.counts.push_back(v.get<std::uint64_t>());
  }
  return out;
}

json mapping_json(const MappingDef& m) {
  json branches = json::array();
  for (const auto& b : m.branches()) branches.push_back({{"m", b.multiplier}, {"r", b.offset}});
  json out{{"d", m.modulus()}, {"branches", branches}};
  if (!m.name().empty()) out["name"] = m.name();
  return out;
}

MappingDef mapping_from(const json& j) {
  if (j.is_string()) return resolve_family(j.get<std::string>());
  if (!j.is_object() || !j.contains("d") || !j.contains("branches")) {
    throw IoError("mapping: expected an object with \"d\" and \"branches\"");
  }
  try {
    std::vector<Branch> branches;
    for (const auto& b : j.at("branches")) branches.push_back({b.at("m").get<std::int64_t>(), b.at("r").get<std::int64_t>()});
    return MappingDef::validate(j.at("d").get<std::int64_t>(), std::move(branches), j.value("name", std::string{}));
  } catch (const json::exception& e) {
    throw IoError(std::string("mapping: ") + e.what());
  }
}

json parse(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw IoError(std::string("invalid JSON: ") + e.what());
  }
}

json cycle_json(const Cycle& c) {
  json elements = json::array();
  for (const auto& v : c.elements) elements.push_back(big_to_json(v));
  return {{"elements", elements},
          {"period", c.period()},
          {"min", big_to_json(c.min_element())},
          {"least", big_to_json(c.least_magnitude())},
          {"counts", counts_to_json(c.counts)}};
}

json limits_json(const DetectLimits& l) {
  return {{"max_steps", l.max_steps}, {"max_magnitude", big_to_json(l.max_magnitude)}};
}

json report_json(const SearchReport& r) {
  json cycles = json::array();
  for (std::size_t i = 0; i < r.catalog.cycles.size(); ++i) {
    json c = cycle_json(r.catalog.cycles[i]);
    c["hits"] = r.hits[i];
    cycles.push_back(std::move(c));
  }
  return {{"mapping", mapping_json(r.mapping)},
          {"lo", r.lo},
          {"hi", r.hi},
          {"limits", limits_json(r.limits)},
          {"tallies",
           {{"entered-cycle", r.entered}, {"cutoff-steps", r.step_cutoff}, {"cutoff-magnitude", r.magnitude_cutoff}}},
          {"cycles", cycles},
          {"notes", r.notes}};
}

std::string join_counts(const BranchCounts& c) {
  std::string out;
  for (std::size_t i = 0; i < c.counts.size(); ++i) {
    if (i) out += ';';
    out += std::to_string(c.counts[i]);
  }
  return out;
}

}  // namespace

std::string mapping_to_json(const MappingDef& mapping) { return mapping_json(mapping).dump(2) + "\n"; }

MappingDef mapping_from_json(std::string_view text) { return mapping_from(parse(text)); }

MappingDef load_mapping_file(const std::filesystem::path& path) { return mapping_from_json(read_text_file(path)); }

MappingDef resolve_family(std::string_view spec) {
  auto unknown = [&] {
    return MappingError(MappingError::Kind::UnknownFamily, std::nullopt,
                        "unknown family \"" + std::string(spec) +
                            "\" (expected collatz, 3x1, perm:<1-6>, carnielli-T:<d>, carnielli-L:<d> or custom:<file>)");
  };
  auto number_after = [&](std::string_view prefix) -> std::int64_t {
    const std::string_view rest = spec.substr(prefix.size());
    std::int64_t v = 0;
    const auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), v);
    if (ec != std::errc() || ptr != rest.data() + rest.size() || rest.empty()) throw unknown();
    return v;
  };
  if (spec == "collatz" || spec == "g") return collatz();
  if (spec == "3x1" || spec == "T") return three_x_plus_one();
  if (spec.starts_with("perm:")) return permutation_variant(static_cast<int>(number_after("perm:")));
  if (spec.starts_with("carnielli-T:")) return carnielli_T(number_after("carnielli-T:"));
  if (spec.starts_with("carnielli-L:")) return carnielli_L(number_after("carnielli-L:"));
  if (spec.starts_with("custom:")) return load_mapping_file(std::string(spec.substr(7)));
  throw unknown();
}

std::string catalog_to_json(const CycleCatalog& catalog) {
  json cycles = json::array();
  for (const auto& c : catalog.cycles) cycles.push_back(cycle_json(c));
  json out{{"mapping", mapping_json(catalog.mapping)}, {"cycles", cycles}, {"notes", catalog.notes}};
  return out.dump(2) + "\n";
}

std::string catalog_file_to_json(const CatalogFile& file) {
  json cycles = json::array();
  for (const auto& e : file.entries) {
    json c = json::object();
    if (e.elements) {
      json elements = json::array();
      for (const auto& v : *e.elements) elements.push_back(big_to_json(v));
      c["elements"] = elements;
    }
    if (e.seed) c["seed"] = big_to_json(*e.seed);
    if (e.period) c["period"] = e.period;
    if (e.min) c["min"] = big_to_json(*e.min);
    if (e.least_magnitude) c["least"] = big_to_json(*e.least_magnitude);
    if (e.counts) c["counts"] = counts_to_json(*e.counts);
    if (!e.note.empty()) c["note"] = e.note;
    cycles.push_back(std::move(c));
  }
  json out{{"mapping", mapping_json(file.mapping)}, {"cycles", cycles}, {"notes", file.notes}};
  return out.dump(2) + "\n";
}

CatalogFile catalog_from_json(std::string_view text) {
  const json j = parse(text);
  if (!j.is_object() || !j.contains("mapping") || !j.contains("cycles") || !j.at("cycles").is_array()) {
    throw IoError("catalog: expected an object with \"mapping\" and a \"cycles\" array");
  }
  CatalogFile out{mapping_from(j.at("mapping")), {}, {}};
  if (j.contains("notes")) {
    for (const auto& n : j.at("notes")) out.notes.push_back(n.get<std::string>());
  }
  for (const auto& c : j.at("cycles")) {
    if (!c.is_object()) throw IoError("catalog: every cycle must be an object");
    CatalogEntry e;
    if (c.contains("elements")) {
      std::vector<BigInt> elements;
      for (const auto& v : c.at("elements")) elements.push_back(big_from_json(v, "elements"));
      e.elements = std::move(elements);
    }
    if (c.contains("seed")) e.seed = big_from_json(c.at("seed"), "seed");
    if (c.contains("period")) {
      if (!c.at("period").is_number_unsigned()) throw IoError("period: expected a non-negative integer");
      e.period = c.at("period").get<std::size_t>();
    }
    if (c.contains("min")) e.min = big_from_json(c.at("min"), "min");
    if (c.contains("least")) e.least_magnitude = big_from_json(c.at("least"), "least");
    if (c.contains("counts")) e.counts = counts_from_json(c.at("counts"));
    if (c.contains("note")) e.note = c.at("note").get<std::string>();
    if (!e.elements && !e.seed && !e.min && !e.least_magnitude) {
      throw IoError("catalog: a cycle needs \"elements\" or one of \"seed\", \"least\", \"min\"");
    }
    out.entries.push_back(std::move(e));
  }
  return out;
}

CatalogFile load_catalog_file(const std::filesystem::path& path) { return catalog_from_json(read_text_file(path)); }

std::string report_to_json(const SearchReport& report) { return report_json(report).dump(2) + "\n"; }

std::string node_report_to_json(const NodeSearchReport& report) {
  json out = report_json(report.report);
  out["node"] = {{"k1", big_to_json(report.k1)},
                 {"k2", big_to_json(report.k2)},
                 {"side", to_string(report.side)},
                 {"constant", to_string(report.bound.constant)},
                 {"C", report.bound.C.fixed(7)},
                 {"ln_C", report.bound.ln_C.fixed(7)},
                 {"empty", report.empty},
                 {"truncated", report.truncated}};
  return out.dump(2) + "\n";
}

std::string report_to_csv(const SearchReport& report) {
  std::ostringstream out;
  out << "period,min,least,counts,hits,elements\n";
  for (std::size_t i = 0; i < report.catalog.cycles.size(); ++i) {
    const Cycle& c = report.catalog.cycles[i];
    out << c.period() << ',' << to_string(c.min_element()) << ',' << to_string(c.least_magnitude()) << ','
        << join_counts(c.counts) << ',' << report.hits[i] << ',';
    for (std::size_t j = 0; j < c.elements.size(); ++j) out << (j ? " " : "") << to_string(c.elements[j]);
    out << '\n';
  }
  return out.str();
}

std::string report_to_table(const SearchReport& report) {
  std::ostringstream out;
  out << "mapping " << (report.mapping.name().empty() ? "custom" : report.mapping.name()) << ", starts ["
      << report.lo << ", " << report.hi << "], max_steps " << report.limits.max_steps << ", max_magnitude "
      << to_string(report.limits.max_magnitude) << "\n";
  out << "entered-cycle " << report.entered << ", cutoff-steps " << report.step_cutoff << ", cutoff-magnitude "
      << report.magnitude_cutoff << "\n";
  out << report.catalog.cycles.size() << " cycles\n";
  out << std::setw(8) << "period" << std::setw(34) << "min" << std::setw(10) << "least" << std::setw(10) << "hits"
      << "  counts\n";
  for (std::size_t i = 0; i < report.catalog.cycles.size(); ++i) {
    const Cycle& c = report.catalog.cycles[i];
    out << std::setw(8) << c.period() << std::setw(34) << to_string(c.min_element()) << std::setw(10)
        << to_string(c.least_magnitude()) << std::setw(10) << report.hits[i] << "  " << join_counts(c.counts) << "\n";
  }
  for (const auto& n : report.notes) out << "note: " << n << "\n";
  return out.str();
}

std::string lambda_decimal(const Node& node) { return node.lambda_value(160).fixed(15); }

std::string ln_C_decimal(const Node& node) { return node.ln_C ? node.ln_C->fixed(7) : std::string(); }

std::string nodes_to_json(const std::vector<Node>& nodes, std::string_view family) {
  json rows = json::array();
  for (const auto& n : nodes) {
    json row{{"i", n.main_index},
             {"j", n.secondary_index},
             {"side", to_string(n.side)},
             {"seed", n.seed},
             {"k1", big_to_json(n.k1)},
             {"k2", big_to_json(n.k2)},
             {"k", big_to_json(n.k())},
             {"lambda", lambda_decimal(n)}};
    row["ln_C"] = n.ln_C ? json(ln_C_decimal(n)) : json(nullptr);
    rows.push_back(std::move(row));
  }
  return json{{"family", family}, {"nodes", rows}}.dump(2) + "\n";
}

std::string nodes_to_csv(const std::vector<Node>& nodes) {
  std::ostringstream out;
  out << "i,j,side,k1,k2,k,lambda,ln_C\n";
  for (const auto& n : nodes) {
    out << n.main_index << ',' << n.secondary_index << ',' << to_string(n.side) << ',' << to_string(n.k1) << ','
        << to_string(n.k2) << ',' << to_string(n.k()) << ',' << lambda_decimal(n) << ',' << ln_C_decimal(n) << '\n';
  }
  return out.str();
}

std::string nodes_to_table(const std::vector<Node>& nodes) {
  std::ostringstream out;
  out << std::setw(9) << "node" << std::setw(5) << "side" << std::setw(12) << "k1" << std::setw(12) << "k2"
      << std::setw(12) << "k" << std::setw(20) << "lambda" << std::setw(14) << "ln C" << "\n";
  for (const auto& n : nodes) {
    const std::string label = "N" + std::to_string(n.main_index) + "," + std::to_string(n.secondary_index);
    out << std::setw(9) << label << std::setw(5) << to_string(n.side) << std::setw(12) << to_string(n.k1)
        << std::setw(12) << to_string(n.k2) << std::setw(12) << to_string(n.k()) << std::setw(20) << lambda_decimal(n)
        << std::setw(14) << (n.ln_C ? ln_C_decimal(n) : "-") << "\n";
  }
  return out.str();
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace cyclekit
