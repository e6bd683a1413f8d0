#pragma once

// Command-line front end. Subcommands:
//
//   cam       --model M (--images DIR | --list CSV) --out ARCHIVE
//   stats     --manifest F
//   fairness  --manifest F [--alpha A] [--targets 1e-1,1e-2,...]
//   report    --manifest F [--colormap NAME] [--bins N] [--overlay-alpha A]
//   selftest
//
// Output files are named <dataset>_<model>_<panel>_<groups>.<ext> and go to
// the directory chosen by resolve_output_dir (--out overrides it).

#include <ostream>
#include <string>
#include <vector>

namespace fairlens {

// `args` excludes the program name. Returns the process exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fairlens
