#include <cmath>
#include <iomanip>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>

#include "screwbif/error.hpp"
#include "screwbif/geometry.hpp"

namespace screwbif {

void write_curve_csv(std::ostream& os, const Curve3& c, const std::vector<std::string>& comments) {
  for (const auto& line : comments) os << "# " << line << '\n';
  os << "s,x,y,z\n";
  os << std::setprecision(17);
  const Grid& g = c.grid();
  for (int j = 0; j < g.size(); ++j)
    os << g.node(j) << ',' << c.x[j] << ',' << c.y[j] << ',' << c.z[j] << '\n';
}

Curve3 read_curve_csv(std::istream& is, std::optional<double> radius) {
  std::vector<double> s, x, y, z;
  std::string line;
  bool header_seen = false;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      if (line.rfind("s,x,y,z", 0) != 0)
        throw Error(ErrorCode::InvalidArgument, "curve CSV: expected header 's,x,y,z'");
      header_seen = true;
      continue;
    }
    std::istringstream row(line);
    std::string cell;
    double vals[4];
    for (double& v : vals) {
      if (!std::getline(row, cell, ','))
        throw Error(ErrorCode::InvalidArgument, "curve CSV: short row '" + line + "'");
      v = std::stod(cell);
    }
    s.push_back(vals[0]);
    x.push_back(vals[1]);
    y.push_back(vals[2]);
    z.push_back(vals[3]);
  }
  const int n = static_cast<int>(s.size());
  if (n < 16) throw Error(ErrorCode::InvalidArgument, "curve CSV: too few rows");
  const double R = radius ? *radius : s[1] * n / (2.0 * std::numbers::pi);
  const Grid grid(R, n);
  for (int j = 0; j < n; ++j)
    if (std::abs(s[static_cast<size_t>(j)] - grid.node(j)) > 1e-9 * grid.period())
      throw Error(ErrorCode::Grid, "curve CSV: samples are not on the equispaced grid");
  return {ScalarField(grid, std::move(x)), ScalarField(grid, std::move(y)),
          ScalarField(grid, std::move(z))};
}

}  // namespace screwbif
