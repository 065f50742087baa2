#ifndef SEQMD_TOOLS_COMMANDS_H_
#define SEQMD_TOOLS_COMMANDS_H_

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "manifest.h"

namespace seqmd::cli {

// Flag values left unset fall back to the --config file, then to defaults.

struct GenerateFlags {
  std::optional<int> queries;
  std::optional<int> candidates;
};

struct SplitFlags {
  std::optional<std::string> data;
  std::optional<double> threshold;
  std::optional<std::string> metric;
};

struct ModelFlags {
  std::optional<std::string> model;
  std::optional<std::string> md;
  std::optional<std::string> tasks;
};

struct TrainFlags {
  std::optional<std::string> data;
  ModelFlags model;
  std::optional<int> epochs;
  std::optional<int> batch_size;
  std::optional<double> lr;
  std::optional<std::string> optimizer;
  std::optional<std::string> weights;
  std::optional<int> patience;
  std::optional<int> region;
  std::optional<double> val_fraction;
  std::optional<std::string> init;
};

struct EvalFlags {
  std::optional<std::string> data;
  std::vector<std::string> checkpoints;  // "path" or "name=path"
  std::optional<int> depth;
  std::optional<std::string> gain;
  std::optional<std::size_t> top_n;
  std::optional<std::string> groups;
};

struct CompareFlags {
  std::optional<std::string> data;
  std::optional<std::string> models;
  std::optional<int> tasks;
  std::optional<int> epochs;
  std::optional<double> lr;
  std::optional<int> depth;
  std::optional<int> threads;
};

struct ExperimentFlags {
  std::optional<std::string> name;
  std::optional<std::string> seeds;
  std::optional<int> threads;
  std::optional<int> epochs;
  std::optional<int> queries;
  std::optional<int> test_queries;
};

struct ParamsFlags {
  std::optional<std::string> model;
  std::optional<std::string> tasks;
};

void CmdGenerate(const GlobalOptions& g, const GenerateFlags& f, std::ostream& out);
void CmdSplit(const GlobalOptions& g, const SplitFlags& f, std::ostream& out);
void CmdTrain(const GlobalOptions& g, const TrainFlags& f, std::ostream& out);
void CmdEval(const GlobalOptions& g, const EvalFlags& f, std::ostream& out);
void CmdCompare(const GlobalOptions& g, const CompareFlags& f, std::ostream& out);
void CmdExperiment(const GlobalOptions& g, const ExperimentFlags& f, std::ostream& out);
void CmdParams(const GlobalOptions& g, const ParamsFlags& f, std::ostream& out);

}  // namespace seqmd::cli

#endif  // SEQMD_TOOLS_COMMANDS_H_
