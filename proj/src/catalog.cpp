#include "cartanlab/catalog.hpp"

#include <algorithm>

namespace cartanlab {

namespace {

std::vector<CatalogEntry> build() {
    std::vector<CatalogEntry> v;

    v.push_back({"hei3", "algebra", "Heisenberg algebra hei3, [e1,e2] = e3", R"toml(# Heisenberg algebra in dimension 3
[algebra]
name = "hei3"
dim = 3
basis = ["e1", "e2", "e3"]

[[bracket]]
j = 1
k = 2
result = [{ i = 3, coeff = "1" }]
)toml"});

    v.push_back({"euclidean_abelian", "scenario",
                 "Identity coframe on R^3, tau = 0, model so(3) |x R^3; flat and integrable", R"toml([scenario]
name = "euclidean_abelian"

[chart]
coords = ["x", "y", "z"]
lo = [-1.0, -1.0, -1.0]
hi = [1.0, 1.0, 1.0]
grid = 9
fd_step = 1e-4
tol = 1e-6

[model]
h_algebra = "builtin:so(3)"
k_algebra = "builtin:ab(3)"
rep = "standard"

[coframe]
rows = [["1", "0", "0"],
        ["0", "1", "0"],
        ["0", "0", "1"]]

[frames]
fields = [["1", "0", "0"],
          ["0", "1", "0"],
          ["0", "0", "1"]]
)toml"});

    const char* contact_body = R"toml(
[chart]
coords = ["x", "y", "z"]
lo = [-1.0, -1.0, -1.0]
hi = [1.0, 1.0, 1.0]
grid = 9
fd_step = 1e-4
tol = 1e-6

# theta1 = dy, theta2 = dx, theta3 = dz - y dx
[coframe]
rows = [["0", "1", "0"],
        ["1", "0", "0"],
        ["-y", "0", "1"]]

# V1 = d/dy, V2 = d/dx + y d/dz, V3 = d/dz
[frames]
fields = [["0", "1", "0"],
          ["1", "0", "y"],
          ["0", "0", "1"]]
)toml";

    v.push_back({"contact_hei", "scenario",
                 "Contact coframe on R^3, tau = 0, model sp(1,1) |x hei3; flat and hei3-integrable",
                 std::string(R"toml([scenario]
name = "contact_hei"

[model]
h_algebra = "builtin:sp(1,1)"
k_algebra = "builtin:hei(3)"
rep = "standard"
)toml") + contact_body});

    v.push_back({"contact_abelian", "scenario",
                 "Contact coframe on R^3, tau = 0, model sp(1,1) |x R^3; not flat, torsion T^3_12 = -1",
                 std::string(R"toml([scenario]
name = "contact_abelian"

[model]
h_algebra = "builtin:sp(1,1)"
k_algebra = "builtin:ab(3)"
rep = "standard"
)toml") + contact_body});

    v.push_back({"sp11_hei_model", "extension",
                 "Reductive extension sp(1,1) |x hei3 with canonical splittings (almost Lie)", R"toml([extension]
name = "sp11_hei_model"
kind = "semidirect"
h_algebra = "builtin:sp(1,1)"
k_algebra = "builtin:hei(3)"
rep = "standard"
)toml"});

    v.push_back({"sp11_hei_perturbed", "extension",
                 "sp(1,1) |x hei3 with a left splitting that is not a bracket morphism", R"toml([extension]
name = "sp11_hei_perturbed"
kind = "semidirect"
h_algebra = "builtin:sp(1,1)"
k_algebra = "builtin:hei(3)"
rep = "standard"
# l = [I_6 | P] with one nonzero entry in P
l = [[1, 0, 0, 0, 0, 0, 0, 0, 0],
     [0, 1, 0, 0, 0, 0, 0, 0, 0],
     [0, 0, 1, 0, 0, 0, 0, 0, 0],
     [0, 0, 0, 1, 0, 0, 0, 0, 0],
     [0, 0, 0, 0, 1, 0, 0, 0, 0],
     [0, 0, 0, 0, 0, 1, 0, 0, 1]]
)toml"});

    v.push_back({"jet2_model", "pfaffian", "Second-order frame data on R^2: g = jet2(2), V = gl(2) x R^2; order 2",
                 R"toml([pfaffian]
name = "jet2_model"
builtin = "second_order(2)"
expected_order = 2
)toml"});

    v.push_back({"jet2_split", "scenario", "Second-order model z2 on R^2 with polynomial tau2, tau1, theta1", R"toml([scenario]
name = "jet2_split"

[chart]
coords = ["x", "y"]
lo = [-1.0, -1.0]
hi = [1.0, 1.0]
grid = 7
fd_step = 1e-4
tol = 1e-6

[model]
second_order = 2

[coframe]
rows = [["1 + x*y", "y"],
        ["x", "1 - y^2/2"]]

[connection]
rows = [["x", "0"],
        ["y^2", "x*y"],
        ["0", "1/3"],
        ["x - y", "x^2"]]

[connection2]
rows = [["x*y", "1"],
        ["0", "y"],
        ["x^2", "0"],
        ["1/2", "x"],
        ["y", "-x"],
        ["0", "x*y"]]
)toml"});

    v.push_back({"translations_groupoid", "groupoid", "Translations of R^2 with G = GL(2)", R"toml([groupoid]
model = "translations"
n = 2
pairs = 200
tangents = 4
bisections = 20
samples = 1000
)toml"});

    v.push_back({"heisenberg_groupoid", "groupoid", "Heisenberg group acting on R^3 with G = Sp(1,1)", R"toml([groupoid]
model = "heisenberg"
k = 1
pairs = 200
tangents = 4
bisections = 20
samples = 1000
)toml"});

    std::sort(v.begin(), v.end(), [](const CatalogEntry& a, const CatalogEntry& b) { return a.name < b.name; });
    return v;
}

}  // namespace

const std::vector<CatalogEntry>& catalog() {
    static const std::vector<CatalogEntry> entries = build();
    return entries;
}

const CatalogEntry* find_catalog(std::string_view name) {
    for (const auto& e : catalog())
        if (e.name == name) return &e;
    return nullptr;
}

}  // namespace cartanlab
