#include "cyclekit/reference_tables.hpp"

#include <cmath>
#include <map>
#include <string>

namespace cyclekit {

namespace {

constexpr Side PP = Side::PP;
constexpr Side PG = Side::PG;

constexpr ReferenceRow kCollatzRows[] = {
    {1, PP, 0, 1, 1, "0.66666666666667", ""},
    {1, PG, 1, 0, 1, "1.33333333333333", ""},
    {2, PP, 1, 1, 2, "0.88888888888889", "0.9067673"},
    {3, PG, 2, 1, 3, "1.18518518518519", "1.2335544"},
    {3, PG, 3, 2, 5, "1.05349794238683", "2.8207519"},
    {4, PP, 4, 3, 7, "0.93644261545496", "2.8773089"},
    {4, PP, 7, 5, 12, "0.98654036854514", "5.0150589"},
    {5, PG, 10, 7, 17, "1.03931824834386", "4.3258524"},
    {5, PG, 17, 12, 29, "1.02532940775684", "5.2893919"},
    {5, PG, 24, 17, 41, "1.01152885180861", "6.4145496"},
    {6, PP, 31, 22, 53, "0.99791404625731", "8.3733287"},
    {7, PG, 55, 39, 94, "1.00941884941434", "7.4449229"},
    {7, PG, 86, 61, 147, "1.00731324838746", "8.1439169"},
    {7, PG, 117, 83, 200, "1.00521203954693", "8.7894147"},
    {7, PG, 148, 105, 253, "1.00311521373084", "9.5380817"},
    {7, PG, 179, 127, 306, "1.00102276179641", "10.841002"},
    {6, PP, 210, 149, 359, "0.99893467461992", "10.958906"},
    {6, PP, 389, 276, 665, "0.99995634684222", "14.7706488"},
    {9, PG, 568, 403, 971, "1.00097906399185", "12.0393806"},
    {9, PG, 957, 679, 1636, "1.00093536809484", "12.6066976"},
    {9, PG, 8737, 6199, 14936, "1.00006185061131", "17.533998"},
    {9, PG, 9126, 6475, 15601, "1.00001819475356", "18.801125"},
};

constexpr ReferenceRow kThreeXRows[] = {
    {1, PP, 0, 1, 1, "0.50000000000000", ""},
    {1, PG, 1, 0, 1, "1.500000000000000", ""},
    {2, PP, 1, 1, 2, "0.75000000000000", "0.3704306"},
    {3, PG, 2, 1, 3, "1.12500000000000", "1.9565895"},
    {4, PP, 3, 2, 5, "0.84375000000000", "1.9956945"},
    {4, PP, 5, 3, 8, "0.94921875000000", "3.6882524"},
    {5, PG, 7, 4, 11, "1.06787109375000", "3.7935996"},
    {5, PG, 12, 7, 19, "1.01364326477050", "5.9107304"},
    {6, PP, 17, 10, 27, "0.96216919273138", "5.2131556"},
    {6, PP, 29, 17, 46, "0.97529632178184", "6.1801493"},
    {6, PP, 41, 24, 65, "0.98860254772961", "7.3067428"},
    {7, PG, 53, 31, 84, "1.00209031404109", "9.2663084"},
    {8, PP, 94, 55, 149, "0.99066903751619", "8.3375594"},
    {8, PP, 147, 86, 233, "0.99273984691538", "9.0366771"},
    {8, PP, 200, 117, 317, "0.99481498495653", "9.6822330"},
    {8, PP, 253, 148, 401, "0.99689446068787", "10.4309339"},
    {8, PP, 306, 179, 485, "0.99897828317652", "11.7338762"},
    {9, PG, 359, 210, 569, "1.00106646150859", "11.8517958"},
    {9, PG, 665, 389, 1054, "1.00004365506344", "15.6635314"},
    {8, PP, 971, 568, 1539, "0.99902189363685", "12.9322606"},
    {8, PP, 1636, 957, 2593, "0.99906550600100", "13.4995787"},
    {8, PP, 14936, 8737, 23673, "0.99993815321363", "18.426880"},
    {8, PP, 15601, 9126, 24727, "0.99998180557715", "19.694008"},
};

}  // namespace

std::span<const ReferenceRow> collatz_reference_nodes() { return kCollatzRows; }
std::span<const ReferenceRow> three_x_plus_one_reference_nodes() { return kThreeXRows; }

std::vector<ReferenceCheck> compare_with_reference(const std::vector<Node>& nodes, std::span<const ReferenceRow> rows,
                                                   const ReferenceTolerance& tolerance) {
  std::map<std::pair<BigInt, BigInt>, const Node*> index;
  for (const auto& n : nodes) index.emplace(std::make_pair(n.k1, n.k2), &n);

  std::vector<ReferenceCheck> out;
  for (const auto& row : rows) {
    ReferenceCheck check;
    check.row = row;
    const auto it = index.find({BigInt(std::to_string(row.k1)), BigInt(std::to_string(row.k2))});
    if (it != index.end()) {
      const Node& n = *it->second;
      check.found = true;
      check.side_ok = n.side == row.side;
      check.k_ok = n.k() == BigInt(std::to_string(row.k));
      // lambda: exact decimal against the exact node value when available.
      const ExactRatio printed = *parse_ratio(row.lambda);
      if (n.lambda) {
        const ExactRatio diff = abs(*n.lambda - printed);
        check.lambda_diff = diff.get_d();
        check.lambda_ok = diff <= tolerance.lambda;
      } else {
        const Real diff = abs(n.lambda_value(256) - Real::from(printed, 256));
        check.lambda_diff = diff.to_double();
        check.lambda_ok = diff <= Real::from(tolerance.lambda, 256);
      }
      if (row.ln_C.empty()) {
        check.ln_C_ok = !n.ln_C || n.seed;
      } else if (n.ln_C) {
        const double printed_ln = std::stod(std::string(row.ln_C));
        check.ln_C_diff = std::fabs(n.ln_C->to_double() - printed_ln);
        check.ln_C_ok = check.ln_C_diff <= tolerance.ln_C;
      }
    }
    out.push_back(check);
  }
  return out;
}

}  // namespace cyclekit
