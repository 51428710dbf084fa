#include "commands.hpp"

int main(int argc, char **argv)
{
    return vcoarse::cli::main_entry(argc, argv);
}
