#pragma once

// Text model files.
//
//   # comment
//   [space]
//   m = 2
//   n = 1
//   vars = t, q
//   fiber = p                  # optional, default y1..yn
//
//   [anchor]
//   rho0 = 1, 0                # m expressions
//   rhoV = 0, 1                # n rows of m, rows separated by ';'
//
//   [structure]
//   C0 = 0                     # n rows of n, C0[a][g] = C^g_{0a}; optional
//   1,2,3 = 1                  # C^3_{12} = 1 (1-based); C^3_{21} is filled in
//
//   [hamiltonian]
//   H = p^2/2
//
//   [sections]
//   free.alpha0 = -q^2/(2*(t+1)^2)
//   free.alphaV = q/(t+1)
//   exact.potential = q^3/3    # alpha = d S
//
//   [sampling]
//   box = 0:1, -1:1            # m or m+n intervals
//   count = 100
//   seed = 42
//
// Expressions may not contain ',', ';' or ':'.

#include <stdexcept>
#include <string>
#include <string_view>

#include "affhj/models.hpp"

namespace affhj {

class ModelFileError : public std::runtime_error {
 public:
  ModelFileError(std::size_t line, const std::string& message);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

ModelBundle parse_model(std::string_view text, const std::string& name = "model");
/// Throws ModelFileError (line 0) when the file cannot be read.
ModelBundle load_model(const std::string& path);

}  // namespace affhj
