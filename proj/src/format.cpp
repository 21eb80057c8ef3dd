#include "nirvana/format.hpp"

#include <charconv>
#include <cmath>

namespace nirvana
{

std::string format_number(double x)
{
	if(std::isnan(x))
		return "nan";
	if(x == 0.0)
		return "0"; // folds -0
	char buf[64];
	const auto res = std::to_chars(buf, buf + sizeof(buf), x);
	return std::string(buf, res.ptr);
}

} // namespace nirvana
