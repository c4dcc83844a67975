#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "stratum/medium.hpp"

namespace stratum::cli {

struct Check
{
	std::string name;
	double measured = 0.0;
	double tolerance = 0.0;
	bool pass = false;
	std::string detail;
};

struct SuiteReport
{
	std::string suite;
	std::vector<Check> checks;

	bool passed() const;
};

const std::vector<std::string> &suite_names();

/*! \brief Run one named suite (or "all"). Throws ConfigError for an unknown name. */
std::vector<SuiteReport> run_suite(const std::string &name, const LayerStack &stack, std::uint64_t seed, int threads);

/*! \brief Thread cap from STRATUM_THREADS (defaults to the hardware concurrency). */
int thread_limit();

} // namespace stratum::cli
