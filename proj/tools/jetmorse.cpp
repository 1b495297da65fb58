#include <jetmorse/cli.hpp>

int main(int argc, char **argv)
{
    return jetmorse::cli::main_entry(argc, argv);
}
