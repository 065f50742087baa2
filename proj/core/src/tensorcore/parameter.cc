#include "seqmd/tensorcore/parameter.h"

#include <cmath>

#include "seqmd/error.h"
#include "seqmd/random.h"

namespace seqmd {

Parameter& ParameterStore::Create(const std::string& name, Shape shape,
                                  InitKind init) {
  if (index_.count(name)) throw ConfigError("duplicate parameter name: " + name);
  Parameter& p = params_.emplace_back();
  p.name = name;
  p.value = Tensor(shape);
  p.grad = Tensor(std::move(shape));
  Reinitialize(p, init);
  index_[name] = &p;
  return p;
}

void ParameterStore::Reinitialize(Parameter& p, InitKind init) const {
  if (init == InitKind::kZero) {
    p.value.Fill(0.0);
    return;
  }
  const double fan_in = static_cast<double>(std::max<std::size_t>(1, p.value.rows()));
  const double bound = std::sqrt(1.0 / fan_in);
  Rng rng(DeriveSeed(root_seed_, p.name));
  for (double& v : p.value.data()) v = rng.Uniform(-bound, bound);
}

Parameter* ParameterStore::Find(const std::string& name) {
  auto it = index_.find(name);
  return it == index_.end() ? nullptr : it->second;
}

const Parameter* ParameterStore::Find(const std::string& name) const {
  auto it = index_.find(name);
  return it == index_.end() ? nullptr : it->second;
}

Parameter& ParameterStore::Get(const std::string& name) {
  Parameter* p = Find(name);
  if (!p) throw ConfigError("unknown parameter: " + name);
  return *p;
}

std::vector<Parameter*> ParameterStore::All() {
  std::vector<Parameter*> out;
  out.reserve(params_.size());
  for (Parameter& p : params_) out.push_back(&p);
  return out;
}

std::vector<const Parameter*> ParameterStore::All() const {
  std::vector<const Parameter*> out;
  out.reserve(params_.size());
  for (const Parameter& p : params_) out.push_back(&p);
  return out;
}

std::size_t ParameterStore::TotalSize() const {
  std::size_t n = 0;
  for (const Parameter& p : params_) n += p.size();
  return n;
}

void ParameterStore::ZeroGrad() {
  for (Parameter& p : params_) p.ZeroGrad();
}

}  // namespace seqmd
