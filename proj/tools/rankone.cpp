#include "rankone/app/cli.hpp"

int main(int argc, char** argv) { return rankone::app::run_cli(argc, argv); }
