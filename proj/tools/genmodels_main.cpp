// Regenerates the built-in model corpus as JSON files.
//
//   forge-genmodels <output-dir>
//
// Writes one forge-model/1 file per corpus bundle plus the deliberately
// broken fixture, and prints name, digest and byte count for each.

#include "forge/io.hpp"
#include "forge/models.hpp"

#include <cstdio>
#include <string>
#include <vector>

int main(int argc, char** argv) {
  if (argc != 2) {
    std::fprintf(stderr, "usage: forge-genmodels <output-dir>\n");
    return 1;
  }
  const std::string dir = argv[1];
  std::vector<forge::ModelBundle> all = forge::model_corpus();
  all.push_back(forge::model_broken());
  for (const auto& b : all) {
    const std::string text = forge::bundle_to_json(b);
    const std::string path = dir + "/" + b.name + ".json";
    forge::write_file(path, text);
    std::printf("%-12s %s %8zu bytes  %s\n", b.name.c_str(), forge::fnv1a64_hex(text).c_str(),
                text.size(), path.c_str());
  }
  return 0;
}
