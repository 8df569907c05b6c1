#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cyclekit/catalog.hpp"
#include "cyclekit/mapping.hpp"
#include "cyclekit/nodes.hpp"
#include "cyclekit/search.hpp"

namespace cyclekit {

/// Malformed input or an unreadable/unwritable file.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Mapping files: {"name": "...", "d": 4, "branches": [{"m": 1, "r": 0}, ...]}.
std::string mapping_to_json(const MappingDef& mapping);
MappingDef mapping_from_json(std::string_view text);
MappingDef load_mapping_file(const std::filesystem::path& path);

/// "collatz", "3x1", "perm:<1-6>", "carnielli-T:<d>", "carnielli-L:<d>" or
/// "custom:<file>". Throws MappingError (UnknownFamily) for anything else.
MappingDef resolve_family(std::string_view spec);

// Catalogs: {"mapping": {...}, "cycles": [{"elements", "period", "min", "counts"}], "notes": [...]}.
// Integers that do not fit in 64 bits are written as decimal strings.
std::string catalog_to_json(const CycleCatalog& catalog);
std::string catalog_file_to_json(const CatalogFile& file);
CatalogFile catalog_from_json(std::string_view text);
CatalogFile load_catalog_file(const std::filesystem::path& path);

std::string report_to_json(const SearchReport& report);
std::string node_report_to_json(const NodeSearchReport& report);
/// One row per cycle: period, min, least, counts, hits, elements.
std::string report_to_csv(const SearchReport& report);
std::string report_to_table(const SearchReport& report);

/// Node tables with columns i, j, side, k1, k2, k, lambda (15 decimals), ln_C (7 decimals).
std::string nodes_to_json(const std::vector<Node>& nodes, std::string_view family);
std::string nodes_to_csv(const std::vector<Node>& nodes);
std::string nodes_to_table(const std::vector<Node>& nodes);

/// Decimal renderings used by every node emitter.
std::string lambda_decimal(const Node& node);
std::string ln_C_decimal(const Node& node);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace cyclekit
