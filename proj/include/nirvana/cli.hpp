#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace nirvana::cli
{

/// Exit codes: 0 = all checks passed, 1 = a check failed, 2 = input error.
enum ExitCode : int
{
	kOk = 0,
	kCheckFailed = 1,
	kInputError = 2,
};

/// Default tolerance: NIRVANA_TOL when set and positive, else `fallback`.
double default_tolerance(double fallback);

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

} // namespace nirvana::cli
