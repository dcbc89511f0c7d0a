// Runs the acceptance checklist and prints one verdict line per criterion.
// Exit status is 0 iff every selected criterion passes.
//
// Options:
//   --threads N   worker threads for the character-sum sweep (default 1)
//   --seed N      seed forwarded to randomized factorization steps (default 0)
//   --only LIST   comma-separated criterion ids to run (default: all)

#include <cstdio>
#include <cstdlib>
#include <string>

#include "starset/verify.hpp"

int main(int argc, char** argv) {
  starset::acceptance_options opt;
  for (int i = 1; i < argc; ++i) {
    std::string arg = argv[i];
    auto next = [&]() -> const char* {
      if (i + 1 >= argc) {
        std::fprintf(stderr, "missing value for %s\n", arg.c_str());
        std::exit(2);
      }
      return argv[++i];
    };
    if (arg == "--threads") {
      opt.threads = static_cast<unsigned>(std::strtoul(next(), nullptr, 10));
    } else if (arg == "--seed") {
      opt.seed = std::strtoull(next(), nullptr, 10);
    } else if (arg == "--only") {
      std::string list = next();
      std::size_t pos = 0;
      while (pos < list.size()) {
        std::size_t comma = list.find(',', pos);
        opt.only.push_back(std::atoi(list.substr(pos, comma - pos).c_str()));
        if (comma == std::string::npos) break;
        pos = comma + 1;
      }
    } else {
      std::fprintf(stderr, "unknown argument: %s\n", arg.c_str());
      return 2;
    }
  }

  starset::acceptance_report rep =
      starset::run_acceptance(opt, [](const starset::criterion_result& r) {
        std::fputs((starset::format_criterion_line(r) + "\n").c_str(), stdout);
        std::fflush(stdout);
      });
  return rep.all_pass ? 0 : 1;
}
