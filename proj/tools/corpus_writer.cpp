// Regenerates the shipped corpus files from the built-in derivations.
// Usage: corpus_writer [DIR]   (default: corpus)

#include <filesystem>
#include <fstream>
#include <iostream>

#include "qml/calculus.hpp"
#include "qml/corpus.hpp"
#include "qml/proof_json.hpp"

int main(int argc, char** argv) {
    std::filesystem::path dir = argc > 1 ? argv[1] : "corpus";
    std::filesystem::create_directories(dir);
    int written = 0;
    for (const qml::corpus_entry& e : qml::builtin_corpus()) {
        qml::check_result r = qml::check_derivation(e.proof);
        if (!r.ok) {
            std::cerr << e.name << ": derivation does not check: " << r.reason << "\n";
            return 1;
        }
        std::ofstream out(dir / (e.name + ".json"));
        if (!out) {
            std::cerr << "cannot write " << (dir / (e.name + ".json")) << "\n";
            return 1;
        }
        out << qml::derivation_to_json(e.proof).dump(2) << "\n";
        ++written;
    }
    std::cout << "wrote " << written << " derivations to " << dir.string() << "\n";
    return 0;
}
