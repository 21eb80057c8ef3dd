#include "nirvana/cli.hpp"

int main(int argc, char** argv)
{
	return nirvana::cli::run(argc, argv);
}
