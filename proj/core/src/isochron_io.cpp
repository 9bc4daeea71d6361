#include <array>
#include <bit>
#include <cstdint>
#include <istream>
#include <ostream>
#include <stdexcept>

#include "irislab/format.hpp"
#include "irislab/iris_sim.hpp"

namespace irislab {

namespace {

constexpr std::array<char, 8> kMagic = {'I', 'R', 'I', 'S', 'I', 'S', 'O', '1'};

void put_u64(std::ostream& os, std::uint64_t v) {
  char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xffu);
  os.write(b, 8);
}

void put_f64(std::ostream& os, double x) { put_u64(os, std::bit_cast<std::uint64_t>(x)); }

std::uint64_t get_u64(std::istream& is) {
  unsigned char b[8];
  if (!is.read(reinterpret_cast<char*>(b), 8)) throw std::runtime_error("truncated isochron file");
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | b[i];
  return v;
}

double get_f64(std::istream& is) { return std::bit_cast<double>(get_u64(is)); }

}  // namespace

void write_field_csv(std::ostream& os, const IsochronField& f) {
  os << "# lambda=" << format_double(f.lambda) << " a=" << format_double(f.a)
     << " nx=" << f.nx << " ny=" << f.ny << '\n';
  os << "i,j,x,y,theta\n";
  for (std::size_t j = 0; j < f.ny; ++j) {
    for (std::size_t i = 0; i < f.nx; ++i) {
      const Vec2 c = f.cell_center(i, j);
      os << i << ',' << j << ',' << format_double(c.x) << ',' << format_double(c.y) << ','
         << format_double(f.at(i, j)) << '\n';
    }
  }
}

void write_field_binary(std::ostream& os, const IsochronField& f) {
  os.write(kMagic.data(), kMagic.size());
  put_u64(os, f.nx);
  put_u64(os, f.ny);
  for (double v : {f.xmin, f.xmax, f.ymin, f.ymax, f.lambda, f.a}) put_f64(os, v);
  for (double v : f.theta) put_f64(os, v);
}

IsochronField read_field_binary(std::istream& is) {
  std::array<char, 8> magic{};
  if (!is.read(magic.data(), magic.size()) || magic != kMagic) {
    throw std::runtime_error("not an isochron grid file");
  }
  IsochronField f;
  f.nx = get_u64(is);
  f.ny = get_u64(is);
  if (f.nx == 0 || f.ny == 0 || f.nx > (1u << 16) || f.ny > (1u << 16)) {
    throw std::runtime_error("implausible isochron grid size");
  }
  f.xmin = get_f64(is);
  f.xmax = get_f64(is);
  f.ymin = get_f64(is);
  f.ymax = get_f64(is);
  f.lambda = get_f64(is);
  f.a = get_f64(is);
  f.theta.resize(f.nx * f.ny);
  for (double& v : f.theta) v = get_f64(is);
  return f;
}

void write_trajectory_csv(std::ostream& os, const std::vector<TrajectoryPoint>& points,
                          const IrisParams& p) {
  os << "# lambda=" << format_double(p.lambda) << " a=" << format_double(p.a) << '\n';
  os << "t,x,y,square\n";
  for (const auto& pt : points) {
    os << format_double(pt.t) << ',' << format_double(pt.p.x) << ',' << format_double(pt.p.y)
       << ',' << pt.square << '\n';
  }
}

}  // namespace irislab
