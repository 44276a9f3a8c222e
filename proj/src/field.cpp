#include "stablab/field.hpp"

#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "stablab/reports.hpp"

namespace stablab {

ScalarField::ScalarField(int dim, std::array<int, 3> dims, std::array<double, 3> origin,
                         std::array<double, 3> spacing)
    : dim_(dim), dims_(dims), origin_(origin), spacing_(spacing) {
  if (dim != 2 && dim != 3) throw std::invalid_argument("ScalarField: dim must be 2 or 3");
  if (dim == 2) dims_[2] = 1;
  std::size_t count = 1;
  for (int a = 0; a < dim; ++a) {
    if (dims_[a] < 4) throw std::invalid_argument("ScalarField: >= 4 points per axis required");
    if (!(spacing_[a] > 0)) throw std::invalid_argument("ScalarField: spacing must be positive");
    count *= dims_[a];
  }
  values_.assign(count, 0.0);
}

ScalarField ScalarField::sample(int dim, std::array<double, 3> lo, std::array<double, 3> hi,
                                std::array<int, 3> dims,
                                const std::function<double(std::array<double, 3>)>& fn) {
  std::array<double, 3> spacing{1, 1, 1};
  for (int a = 0; a < dim; ++a) spacing[a] = (hi[a] - lo[a]) / (dims[a] - 1);
  ScalarField f(dim, dims, lo, spacing);
  for (int k = 0; k < f.dims_[2]; ++k)
    for (int j = 0; j < f.dims_[1]; ++j)
      for (int i = 0; i < f.dims_[0]; ++i) f.at(i, j, k) = fn(f.position(i, j, k));
  return f;
}

std::size_t ScalarField::index(int i, int j, int k) const {
  return static_cast<std::size_t>((k * dims_[1] + j)) * dims_[0] + i;
}

std::array<double, 3> ScalarField::position(int i, int j, int k) const {
  return {origin_[0] + i * spacing_[0], origin_[1] + j * spacing_[1],
          origin_[2] + k * spacing_[2]};
}

double ScalarField::max_spacing() const {
  double h = 0.0;
  for (int a = 0; a < dim_; ++a) h = std::max(h, spacing_[a]);
  return h;
}

void ScalarField::set_mask(std::vector<std::uint8_t> mask) {
  if (!mask.empty() && mask.size() != values_.size())
    throw std::invalid_argument("ScalarField::set_mask: size mismatch");
  mask_ = std::move(mask);
}

void ScalarField::mask_where(const std::function<bool(std::array<double, 3>)>& inside) {
  std::vector<std::uint8_t> m(values_.size(), 0);
  for (int k = 0; k < dims_[2]; ++k)
    for (int j = 0; j < dims_[1]; ++j)
      for (int i = 0; i < dims_[0]; ++i)
        m[index(i, j, k)] = inside(position(i, j, k)) ? 1 : 0;
  mask_ = std::move(m);
}

double ScalarField::cell_volume() const {
  double v = 1.0;
  for (int a = 0; a < dim_; ++a) v *= spacing_[a];
  return v;
}

void ScalarField::write_csv(const std::string& path) const {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  os << dim_;
  for (int a = 0; a < dim_; ++a) os << ',' << dims_[a];
  for (int a = 0; a < dim_; ++a) os << ',' << fmt_double(origin_[a]);
  for (int a = 0; a < dim_; ++a) os << ',' << fmt_double(spacing_[a]);
  os << '\n';
  for (double v : values_) os << fmt_double(v) << '\n';
}

ScalarField ScalarField::read_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open: " + path);
  std::string header;
  if (!std::getline(is, header)) throw std::runtime_error("voxel csv: missing header");
  std::replace(header.begin(), header.end(), ',', ' ');
  std::istringstream hs(header);
  int dim;
  if (!(hs >> dim)) throw std::runtime_error("voxel csv: bad header");
  std::array<int, 3> dims{1, 1, 1};
  std::array<double, 3> origin{0, 0, 0}, spacing{1, 1, 1};
  for (int a = 0; a < dim; ++a) hs >> dims[a];
  for (int a = 0; a < dim; ++a) hs >> origin[a];
  for (int a = 0; a < dim; ++a) hs >> spacing[a];
  if (!hs) throw std::runtime_error("voxel csv: truncated header");
  ScalarField f(dim, dims, origin, spacing);
  for (double& v : f.values_)
    if (!(is >> v)) throw std::runtime_error("voxel csv: truncated values");
  return f;
}

void ScalarField::write_binary(const std::string& path) const {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  os.write("SLF1", 4);
  std::int32_t d = dim_;
  os.write(reinterpret_cast<const char*>(&d), 4);
  for (int a = 0; a < 3; ++a) {
    std::int32_t v = dims_[a];
    os.write(reinterpret_cast<const char*>(&v), 4);
  }
  os.write(reinterpret_cast<const char*>(origin_.data()), 3 * sizeof(double));
  os.write(reinterpret_cast<const char*>(spacing_.data()), 3 * sizeof(double));
  os.write(reinterpret_cast<const char*>(values_.data()),
           static_cast<std::streamsize>(values_.size() * sizeof(double)));
}

ScalarField ScalarField::read_binary(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open: " + path);
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, "SLF1", 4) != 0)
    throw std::runtime_error("voxel binary: bad magic");
  std::int32_t d;
  is.read(reinterpret_cast<char*>(&d), 4);
  std::array<int, 3> dims{1, 1, 1};
  for (int a = 0; a < 3; ++a) {
    std::int32_t v;
    is.read(reinterpret_cast<char*>(&v), 4);
    dims[a] = v;
  }
  std::array<double, 3> origin, spacing;
  is.read(reinterpret_cast<char*>(origin.data()), 3 * sizeof(double));
  is.read(reinterpret_cast<char*>(spacing.data()), 3 * sizeof(double));
  ScalarField f(d, dims, origin, spacing);
  is.read(reinterpret_cast<char*>(f.values_.data()),
          static_cast<std::streamsize>(f.values_.size() * sizeof(double)));
  if (!is) throw std::runtime_error("voxel binary: truncated");
  return f;
}

}  // namespace stablab
