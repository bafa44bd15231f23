// Generates a curtailed synthetic dataset, cleans it, and prints the sweep
// table with recall against the generator's truth.

#include <iostream>

#include "wpcclean/wpcclean.hpp"

int main() {
  wpcclean::SynthConfig cfg;
  cfg.seed = 42;
  const auto synth = wpcclean::generate(cfg);

  const auto result = wpcclean::run(synth.dataset);
  std::cout << wpcclean::summary(result.report) << "\n\n" << wpcclean::sweep_table(result.report);

  const auto m = wpcclean::evaluate(wpcclean::labels_of(result.labeled), synth.truth);
  std::cout << "\nabnormal recall " << m.recall() << ", type3 recall "
            << m.type(wpcclean::Label::Type3).recall() << ", normal false-flag rate "
            << m.false_flag_rate() << '\n';
}
