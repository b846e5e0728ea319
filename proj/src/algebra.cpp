#include "ppslab/algebra.hpp"

#include <algorithm>
#include <sstream>

namespace ppslab {

int ProjectorAlgebra::find(const Projector& p, const Tolerances& tol) const {
    for (int i = 0; i < size(); ++i) {
        if (projector_equal(elements[i], p, tol)) return i;
    }
    return -1;
}

bool ProjectorAlgebra::pair_commutes(int i, int j) const {
    if (i == j) return true;
    const auto key = std::minmax(i, j);
    return product_of.count({key.first, key.second}) > 0;
}

int ProjectorAlgebra::product_index(int i, int j) const {
    if (i == j) return i;
    const auto key = std::minmax(i, j);
    const auto it = product_of.find({key.first, key.second});
    if (it == product_of.end()) {
        std::ostringstream os;
        os << "no recorded product for pair (" << i << ", " << j << ")";
        throw MissingElement(os.str());
    }
    return it->second;
}

int ProjectorAlgebra::join_index(int i, int j) const {
    const int ci = complement_of.at(i);
    const int cj = complement_of.at(j);
    return complement_of.at(product_index(ci, cj));
}

namespace {

std::string wrap(const std::string& name) {
    if (name.size() == 1 || name.find_first_of("+-*") == std::string::npos) return name;
    return "(" + name + ")";
}

struct Builder {
    Index dim;
    Tolerances tol;
    int max_size;
    std::vector<Projector> elements;
    std::vector<std::string> names;

    int find(const Projector& p) const {
        for (std::size_t i = 0; i < elements.size(); ++i) {
            if (projector_equal(elements[i], p, tol)) return static_cast<int>(i);
        }
        return -1;
    }

    int add(const ComplexMatrix& m, const std::string& name) {
        Projector p = validate_projector(m, tol);
        const int existing = find(p);
        if (existing >= 0) return existing;
        if (static_cast<int>(elements.size()) >= max_size) {
            std::ostringstream os;
            os << "closure did not reach a fixpoint within " << max_size
               << " elements (current size " << elements.size() << ")";
            throw ClosureBudgetExceeded(os.str());
        }
        elements.push_back(std::move(p));
        names.push_back(name);
        return static_cast<int>(elements.size()) - 1;
    }
};

} // namespace

ProjectorAlgebra close(const std::vector<Projector>& generators, int max_size,
                       const Tolerances& tol, const std::vector<std::string>& labels) {
    if (generators.empty()) throw InvalidScenario("closure needs at least one generator");
    if (max_size < 2) throw InvalidScenario("max_size must be at least 2");
    const Index dim = generators.front().dim();
    for (const auto& g : generators) {
        if (g.dim() != dim) throw DimensionMismatch("generators differ in dimension");
    }

    Builder b{dim, tol, max_size, {}, {}};
    b.add(ComplexMatrix::Zero(dim, dim), "0");
    b.add(identity(dim), "I");

    std::vector<int> generator_indices;
    for (std::size_t g = 0; g < generators.size(); ++g) {
        std::string label =
            g < labels.size() && !labels[g].empty() ? labels[g] : "G" + std::to_string(g);
        generator_indices.push_back(b.add(generators[g].matrix, label));
    }

    // Fixpoint sweeps: complements of everything, then products of commuting
    // pairs. New elements extend the sweep range until nothing is added.
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t i = 0; i < b.elements.size(); ++i) {
            const std::size_t before = b.elements.size();
            b.add(identity(dim) - b.elements[i].matrix, "I-" + wrap(b.names[i]));
            if (b.elements.size() != before) changed = true;
        }
        for (std::size_t i = 0; i < b.elements.size(); ++i) {
            for (std::size_t j = i + 1; j < b.elements.size(); ++j) {
                if (!commutes(b.elements[i], b.elements[j], tol)) continue;
                const std::size_t before = b.elements.size();
                b.add(b.elements[i].matrix * b.elements[j].matrix,
                      wrap(b.names[i]) + "*" + wrap(b.names[j]));
                if (b.elements.size() != before) changed = true;
            }
        }
    }

    ProjectorAlgebra alg;
    alg.dim = dim;
    alg.elements = std::move(b.elements);
    alg.names = std::move(b.names);
    alg.zero_index = 0;
    alg.identity_index = 1;
    alg.generator_indices = std::move(generator_indices);

    const int m = alg.size();
    alg.complement_of.assign(m, -1);
    for (int i = 0; i < m; ++i) {
        Projector comp = validate_projector(identity(dim) - alg.elements[i].matrix, tol);
        const int c = alg.find(comp, tol);
        if (c < 0) throw MissingElement("complement missing after closure");
        alg.complement_of[i] = c;
    }
    for (int i = 0; i < m; ++i) {
        for (int j = i + 1; j < m; ++j) {
            if (!commutes(alg.elements[i], alg.elements[j], tol)) continue;
            Projector prod =
                validate_projector(alg.elements[i].matrix * alg.elements[j].matrix, tol);
            const int k = alg.find(prod, tol);
            if (k < 0) throw MissingElement("commuting product missing after closure");
            alg.commuting_pairs.emplace_back(i, j);
            alg.product_of[{i, j}] = k;
        }
    }
    return alg;
}

std::vector<std::pair<int, int>> commuting_pairs_of(const ProjectorAlgebra& alg) {
    return alg.commuting_pairs;
}

} // namespace ppslab
