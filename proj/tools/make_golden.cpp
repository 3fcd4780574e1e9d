// Regenerates tests/golden/. Run only when the container format changes:
//   nodetok_make_golden tests/golden

#include <fstream>
#include <iostream>

#include "../tests/golden_fixtures.hpp"
#include "nodetok/serialize.hpp"

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: nodetok_make_golden <output-dir>\n";
    return 2;
  }
  const std::string dir = argv[1];
  auto emit = [&](const nodetok::golden::Fixture& f) {
    const std::string path = dir + "/" + f.name;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out.write(reinterpret_cast<const char*>(f.bytes.data()), static_cast<std::streamsize>(f.bytes.size()));
    nodetok::write_text_file(nodetok::ntpe::sidecar_path(path), nodetok::ntpe::sidecar_text(f.meta));
    std::cout << path << " (" << f.bytes.size() << " bytes)\n";
  };
  for (const auto& f : nodetok::golden::valid_fixtures()) emit(f);
  for (const auto& f : nodetok::golden::malformed_fixtures()) emit(f);
  return 0;
}
