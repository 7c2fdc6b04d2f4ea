#include "distdicho/cli.hpp"

int main(int argc, char** argv)
{
    return distdicho::cli::run_main(argc, argv);
}
