#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace stablab {

// Uniform-grid sample of a scalar function on a box in R^2 or R^3, with an
// optional node mask for the domain. Row-major storage, x fastest.
class ScalarField {
 public:
  ScalarField() = default;
  ScalarField(int dim, std::array<int, 3> dims, std::array<double, 3> origin,
              std::array<double, 3> spacing);

  static ScalarField sample(int dim, std::array<double, 3> lo, std::array<double, 3> hi,
                            std::array<int, 3> dims,
                            const std::function<double(std::array<double, 3>)>& fn);

  int dim() const { return dim_; }
  const std::array<int, 3>& dims() const { return dims_; }
  const std::array<double, 3>& origin() const { return origin_; }
  const std::array<double, 3>& spacing() const { return spacing_; }
  double max_spacing() const;

  std::size_t node_count() const { return values_.size(); }
  std::size_t index(int i, int j, int k = 0) const;
  std::array<double, 3> position(int i, int j, int k = 0) const;

  double& at(int i, int j, int k = 0) { return values_[index(i, j, k)]; }
  double at(int i, int j, int k = 0) const { return values_[index(i, j, k)]; }
  std::vector<double>& values() { return values_; }
  const std::vector<double>& values() const { return values_; }

  // Mask: empty means every node is inside the domain.
  bool has_mask() const { return !mask_.empty(); }
  void set_mask(std::vector<std::uint8_t> mask);
  void mask_where(const std::function<bool(std::array<double, 3>)>& inside);
  bool masked_in(std::size_t flat) const { return mask_.empty() || mask_[flat] != 0; }
  bool masked_in(int i, int j, int k = 0) const { return masked_in(index(i, j, k)); }

  double cell_volume() const;

  // Voxel formats. CSV: one header line
  //   dim,nx,ny[,nz],ox,oy[,oz],hx,hy[,hz]
  // followed by row-major values, one per line. Binary: magic "SLF1",
  // int32 dim/dims, float64 origin/spacing/values.
  void write_csv(const std::string& path) const;
  static ScalarField read_csv(const std::string& path);
  void write_binary(const std::string& path) const;
  static ScalarField read_binary(const std::string& path);

 private:
  int dim_ = 0;
  std::array<int, 3> dims_{1, 1, 1};
  std::array<double, 3> origin_{0, 0, 0};
  std::array<double, 3> spacing_{1, 1, 1};
  std::vector<double> values_;
  std::vector<std::uint8_t> mask_;
};

}  // namespace stablab
