/*
 * Copyright 2026 The polardec Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
// Writes the synthetic fixture corpus used by the end-to-end tests.

#include <CLI11.hpp>

#include <exception>
#include <iostream>

#include "polardec/synthetic.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Write the synthetic two-snapshot fixture corpus", "polardec-synth"};
  std::string out_dir;
  auto spec = polardec::CorpusSpec::standard();
  app.add_option("output", out_dir, "Directory to write")->required();
  app.add_option("--seed", spec.seed, "Generator seed");
  app.add_option("--mass-alignment", spec.mass_alignment,
                 "Probability that a mass user keeps its stance across topics")
      ->check(CLI::Range(0.0, 1.0));
  CLI11_PARSE(app, argc, argv);
  try {
    auto expected = polardec::write_corpus(spec, out_dir);
    std::cout << polardec::dump_json(expected);
  } catch (const std::exception& e) {
    std::cerr << "polardec-synth: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
