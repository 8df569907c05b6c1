#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "cyclekit/io.hpp"

using namespace cyclekit;

namespace {

const std::string kData = CYCLEKIT_DATA_DIR;

std::size_t count_lines(const std::string& s) {
  std::size_t n = 0;
  for (char c : s) n += c == '\n';
  return n;
}

}  // namespace

TEST(MappingJson, RoundTrip) {
  for (const auto& m : {collatz(), three_x_plus_one(), permutation_variant(5), carnielli_L(5)}) {
    const auto back = mapping_from_json(mapping_to_json(m));
    EXPECT_TRUE(back.same_map(m));
    EXPECT_EQ(back.name(), m.name());
  }
}

TEST(MappingJson, BundledMatthewsFile) {
  const auto m = load_mapping_file(kData + "/mappings/matthews.json");
  EXPECT_TRUE(m.same_map(MappingDef::validate(4, {{1, 0}, {3, 3}, {5, 2}, {17, 3}})));
  EXPECT_TRUE(resolve_family("custom:" + kData + "/mappings/matthews.json").same_map(m));
}

TEST(MappingJson, MalformedInput) {
  EXPECT_THROW(mapping_from_json("{"), IoError);
  EXPECT_THROW(mapping_from_json(R"({"d": 2})"), IoError);
  EXPECT_THROW(mapping_from_json(R"({"d": 2, "branches": [{"m": 1}]})"), IoError);
  EXPECT_THROW(mapping_from_json(R"({"d": 2, "branches": [{"m": 1, "r": 0}, {"m": 3, "r": 0}]})"), MappingError);
  EXPECT_THROW(load_mapping_file(kData + "/does-not-exist.json"), IoError);
}

TEST(ResolveFamily, NamesAndErrors) {
  EXPECT_TRUE(resolve_family("collatz").same_map(collatz()));
  EXPECT_TRUE(resolve_family("g").same_map(collatz()));
  EXPECT_TRUE(resolve_family("3x1").same_map(three_x_plus_one()));
  EXPECT_TRUE(resolve_family("T").same_map(three_x_plus_one()));
  EXPECT_TRUE(resolve_family("perm:3").same_map(permutation_variant(3)));
  EXPECT_TRUE(resolve_family("carnielli-T:5").same_map(carnielli_T(5)));
  EXPECT_TRUE(resolve_family("carnielli-L:4").same_map(carnielli_L(4)));
  for (const char* bad : {"", "perm:7", "perm:x", "carnielli-T:1", "5x+1", "custom:"}) {
    try {
      resolve_family(bad);
      ADD_FAILURE() << bad;
    } catch (const MappingError&) {
    } catch (const IoError&) {
    }
  }
  try {
    resolve_family("5x+1");
  } catch (const MappingError& e) {
    EXPECT_EQ(e.kind(), MappingError::Kind::UnknownFamily);
  }
}

TEST(CatalogJson, RoundTripKeepsBigIntegers) {
  SearchOptions o;
  o.limits.max_steps = 100'000;
  const MappingDef m = MappingDef::validate(4, {{1, 0}, {3, 3}, {5, 2}, {17, 3}}, "matthews");
  const auto cycle = detect_cycle(m, BigInt(-513), o.limits);
  ASSERT_TRUE(cycle.cycle);
  CycleCatalog catalog{m, {*cycle.cycle}, {"one long cycle"}};
  const std::string text = catalog_to_json(catalog);
  EXPECT_NE(text.find("\"-564506377241448536097472678944\""), std::string::npos);
  const auto back = catalog_from_json(text);
  ASSERT_EQ(back.entries.size(), 1u);
  EXPECT_EQ(*back.entries[0].elements, cycle.cycle->elements);
  EXPECT_EQ(back.notes, catalog.notes);
  EXPECT_TRUE(verify_catalog(back).all_passed());
}

TEST(CatalogJson, SeedAndLeastEntries) {
  const auto file = load_catalog_file(kData + "/catalogs/perm3.json");
  EXPECT_TRUE(file.mapping.same_map(permutation_variant(3)));
  ASSERT_EQ(file.entries.size(), 2u);
  EXPECT_FALSE(file.entries[1].elements);
  EXPECT_EQ(*file.entries[1].seed, 144);
  EXPECT_EQ(file.entries[1].period, 94u);

  const auto again = catalog_from_json(catalog_file_to_json(file));
  EXPECT_EQ(*again.entries[1].seed, 144);
  EXPECT_EQ(again.entries[1].counts->counts, (std::vector<std::uint64_t>{30, 25, 39}));

  const auto matthews = load_catalog_file(kData + "/catalogs/matthews17.json");
  EXPECT_TRUE(matthews.entries[0].least_magnitude.has_value());
  EXPECT_THROW(catalog_from_json(R"({"mapping": "collatz", "cycles": [{"period": 2}]})"), IoError);
  EXPECT_THROW(catalog_from_json(R"({"cycles": []})"), IoError);
  EXPECT_THROW(catalog_from_json(R"({"mapping": "collatz", "cycles": [{"elements": ["x"]}]})"), IoError);
}

TEST(ReportFormats, JsonCsvAndTableDescribeTheSameCycles) {
  const auto r = search_range(collatz(), 1, 200);
  const std::string csv = report_to_csv(r);
  EXPECT_EQ(count_lines(csv), 1 + r.catalog.cycles.size());
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "period,min,least,counts,hits,elements");
  EXPECT_NE(csv.find("5,4,4,2;2;1,"), std::string::npos);

  const std::string json = report_to_json(r);
  EXPECT_NE(json.find("\"entered-cycle\""), std::string::npos);
  EXPECT_NE(json.find("\"cutoff-steps\""), std::string::npos);
  const auto back = catalog_from_json(json);
  ASSERT_EQ(back.entries.size(), r.catalog.cycles.size());
  for (std::size_t i = 0; i < back.entries.size(); ++i) {
    EXPECT_EQ(*back.entries[i].elements, r.catalog.cycles[i].elements);
  }
  const std::string table = report_to_table(r);
  EXPECT_NE(table.find("44"), std::string::npos);
}

TEST(NodeFormats, CsvJsonAndTableAgree) {
  NodeStop stop;
  stop.max_main = 6;
  NodeOptions opts;
  opts.constant = bound_constants::collatz();
  const auto nodes = generate_nodes(TwoRatioFamily::collatz(), stop, opts);
  const std::string csv = nodes_to_csv(nodes);
  EXPECT_EQ(count_lines(csv), nodes.size() + 1);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "i,j,side,k1,k2,k,lambda,ln_C");
  EXPECT_NE(csv.find(",PP,31,22,53,0.997914046257311,8.3733287"), std::string::npos);
  const std::string json = nodes_to_json(nodes, "collatz");
  EXPECT_NE(json.find("0.997914046257311"), std::string::npos);
  EXPECT_NE(json.find("8.3733287"), std::string::npos);
  const std::string table = nodes_to_table(nodes);
  EXPECT_NE(table.find("0.997914046257311"), std::string::npos);
  EXPECT_EQ(lambda_decimal(nodes[2]), "0.888888888888889");
  EXPECT_EQ(ln_C_decimal(nodes[2]), "0.9067673");
  EXPECT_EQ(ln_C_decimal(nodes[0]), "");
}

TEST(Files, WriteAndRead) {
  const auto dir = std::filesystem::temp_directory_path() / "cyclekit-io-test";
  std::filesystem::create_directories(dir);
  const auto file = dir / "x.txt";
  write_text_file(file, "abc\n");
  EXPECT_EQ(read_text_file(file), "abc\n");
  std::filesystem::remove_all(dir);
  EXPECT_THROW(read_text_file(file), IoError);
  EXPECT_THROW(write_text_file(dir / "missing" / "y.txt", "z"), IoError);
}
