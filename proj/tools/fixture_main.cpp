// Writes the synthetic demo dataset (model, faces, image list, scores,
// manifest) used by the walkthrough in the README.

#include <cstdlib>
#include <iostream>
#include <string>

#include "fairlens/synthetic.hpp"

int main(int argc, char** argv) {
  if (argc < 2 || argc > 3) {
    std::cerr << "usage: fairlens-fixture DIR [IMAGES_PER_GROUP]\n";
    return 1;
  }
  try {
    const std::size_t per_group = argc == 3 ? std::stoul(argv[2]) : 4;
    const auto d = fairlens::write_demo_dataset(argv[1], per_group);
    std::cout << "model    " << d.model_path << '\n'
              << "images   " << d.image_list << '\n'
              << "scores   " << d.scores_path << '\n'
              << "manifest " << d.manifest_path << '\n';
  } catch (const std::exception& e) {
    std::cerr << "fairlens-fixture: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
