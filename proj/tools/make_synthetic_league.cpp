// Writes a simulated two-season league in the fbref team match log layout.
// Useful for trying the pipeline without a scraped dataset.

#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "oddsmith/error.hpp"
#include "oddsmith/synthetic.hpp"

int main(int argc, char** argv) {
  oddsmith::LeagueOptions options;
  std::string out;

  CLI::App app{"simulate a double round-robin league as a match CSV"};
  app.add_option("--teams", options.teams, "even number of teams, 4 to 20");
  app.add_option("--seasons", options.seasons, "number of seasons");
  app.add_option("--first-season", options.first_season, "starting year of the first season");
  app.add_option("--seed", options.seed, "random seed");
  app.add_option("--home-advantage", options.home_advantage, "log expected-goals boost at home");
  app.add_option("--missing-rate", options.missing_rate, "share of statistic cells left blank");
  app.add_option("--out", out, "output CSV (stdout when omitted)");
  CLI11_PARSE(app, argc, argv);

  try {
    const std::string csv = oddsmith::synthetic_league_csv(options);
    if (out.empty()) {
      std::cout << csv;
    } else {
      std::ofstream file(out, std::ios::binary);
      if (!(file << csv)) {
        std::cerr << "error: cannot write " << out << '\n';
        return 3;
      }
    }
  } catch (const oddsmith::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
