#ifndef SEQMD_TENSORCORE_PARAMETER_H_
#define SEQMD_TENSORCORE_PARAMETER_H_

#include <cstdint>
#include <deque>
#include <map>
#include <string>
#include <vector>

#include "seqmd/tensorcore/tensor.h"

namespace seqmd {

// A named trainable leaf. `grad` always has the shape of `value`.
struct Parameter {
  std::string name;
  Tensor value;
  Tensor grad;

  std::size_t size() const { return value.size(); }
  void ZeroGrad() { grad.Fill(0.0); }
};

enum class InitKind {
  kZero,
  // uniform(-sqrt(1/fan_in), +sqrt(1/fan_in)); fan_in = rows of the matrix.
  kFanInUniform,
};

// Ordered collection of parameters with stable addresses. Initial values
// are a pure function of (root seed, parameter name).
class ParameterStore {
 public:
  explicit ParameterStore(std::uint64_t root_seed = 0) : root_seed_(root_seed) {}

  ParameterStore(const ParameterStore&) = delete;
  ParameterStore& operator=(const ParameterStore&) = delete;

  std::uint64_t root_seed() const { return root_seed_; }

  // Throws ConfigError if the name is already taken.
  Parameter& Create(const std::string& name, Shape shape, InitKind init);

  Parameter* Find(const std::string& name);
  const Parameter* Find(const std::string& name) const;
  Parameter& Get(const std::string& name);

  std::vector<Parameter*> All();
  std::vector<const Parameter*> All() const;

  std::size_t count() const { return params_.size(); }
  std::size_t TotalSize() const;

  void ZeroGrad();

  // Re-draws a parameter from its seeded initializer.
  void Reinitialize(Parameter& p, InitKind init) const;

 private:
  std::uint64_t root_seed_;
  std::deque<Parameter> params_;
  std::map<std::string, Parameter*> index_;
};

}  // namespace seqmd

#endif  // SEQMD_TENSORCORE_PARAMETER_H_
