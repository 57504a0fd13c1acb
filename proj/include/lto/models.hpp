#pragma once

#include <atomic>
#include <list>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "lto/common.hpp"
#include "lto/lattice.hpp"
#include "lto/operator_core.hpp"
#include "lto/pauli.hpp"

namespace lto {

struct FiniteGroup {
    std::string name;
    int order = 1;
    std::vector<std::vector<int>> mul;  // mul[g][h] = gh
    std::vector<int> inv;
    int unit = 0;

    int operator()(int g, int h) const { return mul[g][h]; }
    static FiniteGroup cyclic(int n);
    static FiniteGroup s3();
    // validates associativity, unit, inverses; BAD_GROUP otherwise
    static FiniteGroup from_table(const std::vector<std::vector<int>>& table, std::string name = "table");
    static FiniteGroup named(const std::string& name);  // "Z<N>" or "S3"
    // p if this is Z/p (p prime) with g -> g+1 labelling, 0 otherwise
    int prime_cyclic() const;

    Mat L(int g) const;  // |h> -> |gh>
    Mat R(int g) const;  // |h> -> |hg>
    Mat P(int g) const;  // |h><h| delta
};

// Two lattice geometries share one model type.
//  edge:   site (x,y) owns the edge to (x+1,y) (slot 0) and to (x,y+1) (slot 1);
//          stars on vertices, plaquettes on squares, as in the boundary figures.
//  medial: one qudit per site; 2x2 faces with lower-left (i,j), even i+j are
//          star (diagonal) faces, odd are plaquette faces. Reflection symmetric
//          about vertical half-integer axes.
enum class Layout { Edge, Medial };

struct ModelDesc {
    std::string kind = "toric";  // toric | qd
    int w = 4, h = 4;
    double cut = 1.5;
    Layout layout = Layout::Edge;
    std::string convention = "paper";  // paper: stars Z-type; standard: stars X-type
    FiniteGroup group = FiniteGroup::cyclic(2);
    std::size_t budget = kDenseBudget;

    nlohmann::json to_json() const;
    static ModelDesc from_json(const nlohmann::json& j);
};

struct Qudit {
    Site owner;
    int slot = 0;
};

struct Term {
    std::string kind;  // star | plaquette
    Site anchor;       // vertex (star) or lower-left corner
    std::vector<int> qudits;
    std::vector<Site> owners;
    std::optional<Pauli> gen;  // full-register generator, prime cyclic groups
    Mat proj;                  // local projector on qudits (in that order)
};

// A local operator given by its matrix on a few qudits, plus the exact Pauli
// form when one exists.
struct LatticeOperator {
    std::string name;
    std::vector<int> qudits;
    Mat local;
    std::optional<Pauli> pauli;
};

class Model {
public:
    ModelDesc desc;
    int d = 2;
    int p = 0;  // prime for the exact backend, 0 if unavailable
    Region patch;
    std::vector<Qudit> qudits;
    std::vector<Term> terms;

    int nq() const { return int(qudits.size()); }
    bool pauli() const { return p != 0; }
    int qudit(Site s, int slot) const;
    std::vector<int> qudits_in(const Region& R) const;
    std::vector<int> terms_in(const Region& R) const;
    bool straddles(const Term& t) const;
    ProductSpace space_of(const std::vector<int>& qs) const;
    nlohmann::json descriptor() const { return desc.to_json(); }

private:
    std::map<std::pair<Site, int>, int> index_;
    friend Model build_model(const ModelDesc&);
};

Model build_model(const ModelDesc& d);

// p_R on the given space (default: the qudits of R).
SparseOperator ground_projection(const Model& m, const Region& R, const ProductSpace* space = nullptr);

// Shared cache of ground projections, LRU-evicted by stored non-zeros.
class ProjectionNet {
public:
    explicit ProjectionNet(const Model& m, std::size_t cap_nnz = 50'000'000) : model_(m), cap_(cap_nnz) {}
    const Model& model() const { return model_; }
    std::shared_ptr<const SparseOperator> get(const Region& R, const ProductSpace& space);
    std::size_t hits() const { return hits_; }

private:
    const Model& model_;
    std::size_t cap_;
    std::size_t used_ = 0;
    std::atomic<std::size_t> hits_{0};
    std::shared_mutex mu_;
    std::list<std::string> order_;
    std::unordered_map<std::string, std::pair<std::shared_ptr<const SparseOperator>, std::list<std::string>::iterator>> cache_;
};

// Generator lists for an interval of rows adjacent to the cut.
std::vector<LatticeOperator> boundary_generators(const Model& m, char side, const Interval& I);
Interval cut_interval(const Model& m, char side, int y0, int y1);

struct CheckReport;
CheckReport straddle_identities(const Model& m, const Interval& I);

// Theta = (site permutation x -> 2c - x) o (complex conjugation in the
// computational / group basis).
struct Reflection {
    double c = 0;
    std::vector<int> perm;  // qudit index -> reflected qudit index
    Pauli apply(const Pauli& P) const;
    LatticeOperator apply(const LatticeOperator& x) const;
};
Reflection reflection(const Model& m);

}  // namespace lto
