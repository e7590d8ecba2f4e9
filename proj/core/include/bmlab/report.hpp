#pragma once

#include <string>
#include <vector>

#include "bmlab/stats.hpp"

namespace bmlab::report {

// All emitters return canonical strings (%.17g doubles, fixed row order) so
// identical runs produce byte-identical artifacts.

std::string format_double(double v);

// {run_id, seed, title, verdicts: [...]} plus free-form numeric extras.
std::string verdicts_json(const std::string& run_id, std::uint64_t seed,
                          const std::string& title,
                          const std::vector<stats::Verdict>& verdicts,
                          const std::vector<std::pair<std::string, double>>& extras = {});

// name,observed,predicted,rule,tolerance,se,pass
std::string verdicts_csv(const std::vector<stats::Verdict>& verdicts);

// replica_index,N,f,q,normalization,value (functional + per-q components)
std::string stats_csv(const stats::RunResult& run);

// N,k,lambda,mean_coeff,mean_weighted_summand
std::string sobolev_csv(const stats::RunResult& run);

void write_file(const std::string& path, const std::string& content);

}  // namespace bmlab::report
