// Regenerates the bundled synthetic two-sample fixture (data/ in the repo).
// Usage: make_fixture <output.csv> [seed]

#include <cstdlib>
#include <iostream>

#include "permci/dataset.hpp"
#include "permci/simulate.hpp"

int main(int argc, char** argv) {
    if (argc < 2) {
        std::cerr << "usage: make_fixture <output.csv> [seed]\n";
        return 2;
    }
    const std::uint64_t seed = argc > 2 ? std::strtoull(argv[2], nullptr, 10) : 424242;
    const auto fx = permci::make_two_sample_fixture(15, 9, 12, seed);
    permci::write_two_sample_csv(argv[1], fx.rows, fx.column_names, fx.group_labels);
    std::cout << "wrote " << argv[1] << " (" << fx.rows.size() << " rows, "
              << fx.column_names.size() << " columns)\n";
    return 0;
}
