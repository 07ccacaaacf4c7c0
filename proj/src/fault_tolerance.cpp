#include "aqec/fault_tolerance.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "aqec/codes.hpp"

namespace aqec {

namespace {

constexpr double kPrune = 1e-24;   // squared-norm floor for keeping a branch
constexpr double kFidTol = 1e-9;   // logical-fidelity tolerance

int bit_val(const BitMap& b, const std::string& name) {
    auto it = b.find(name);
    return it == b.end() ? -1 : it->second;
}

// Wire w of n occupies bit n-1-w: wire 0 is the most significant bit.
long wire_mask(int n_wires, int w) { return 1L << (n_wires - 1 - w); }

void op_x(Vec& a, long m) {
    for (long i = 0; i < a.size(); ++i)
        if (!(i & m)) std::swap(a[i], a[i | m]);
}

void op_z(Vec& a, long m) {
    for (long i = 0; i < a.size(); ++i)
        if (i & m) a[i] = -a[i];
}

void op_h(Vec& a, long m) {
    const double r = 1.0 / std::sqrt(2.0);
    for (long i = 0; i < a.size(); ++i) {
        if (i & m) continue;
        const cxd a0 = a[i], a1 = a[i | m];
        a[i] = r * (a0 + a1);
        a[i | m] = r * (a0 - a1);
    }
}

void op_cnot(Vec& a, long mc, long mt) {
    for (long i = 0; i < a.size(); ++i)
        if ((i & mc) && !(i & mt)) std::swap(a[i], a[i | mt]);
}

void op_cz(Vec& a, long m1, long m2) {
    for (long i = 0; i < a.size(); ++i)
        if ((i & m1) && (i & m2)) a[i] = -a[i];
}

// Unnormalized lowering operator |0><1|.
void op_damp(Vec& a, long m) {
    for (long i = 0; i < a.size(); ++i) {
        if (i & m) continue;
        a[i] = a[i | m];
        a[i | m] = 0.0;
    }
}

// diag(1, sqrt(1-p)), the no-event damping Kraus operator.
void op_e0(Vec& a, long m, double p) {
    const double r = std::sqrt(1.0 - p);
    for (long i = 0; i < a.size(); ++i)
        if (i & m) a[i] *= r;
}

struct SimBranch {
    Vec a;
    BitMap bits;
    bool halted = false;
};

// ---------------------------------------------------------------------------
// Gadget construction.

Location& add(GadgetGraph& g, LocKind k, int step, int part, int w, int w2 = -1,
              std::string scope = "") {
    Location L;
    L.kind = k;
    L.wire = w;
    L.wire2 = w2;
    L.time_step = step;
    L.part = part;
    L.label = std::move(scope);  // completed by finalize_labels
    g.locs.push_back(std::move(L));
    return g.locs.back();
}

const char* kind_name(LocKind k) {
    switch (k) {
        case LocKind::prep0: return "prep0";
        case LocKind::prepPlus: return "prep+";
        case LocKind::cnot: return "cnot";
        case LocKind::cz: return "cz";
        case LocKind::x: return "X";
        case LocKind::z: return "Z";
        case LocKind::h: return "H";
        case LocKind::rest: return "rest";
        case LocKind::measZ: return "measZ";
        case LocKind::measX: return "measX";
    }
    return "?";
}

void finalize_labels(GadgetGraph& g) {
    for (auto& L : g.locs) {
        std::ostringstream os;
        os << L.label << kind_name(L.kind) << "(";
        os << (L.resolve ? std::string("dyn") : g.wires[L.wire].name);
        if (L.kind == LocKind::cnot || L.kind == LocKind::cz)
            os << "->" << (L.resolve2 ? std::string("dyn") : g.wires[L.wire2].name);
        os << ")@t" << L.time_step;
        L.label = os.str();
    }
}

// One error-correction unit: two parallel parity extractions (part 1), then a
// conditional second round locating the damped qubit, an X correction, and a
// phase-recovery section rebuilding the codeword superposition (part 2).
struct EcOptions {
    std::string prefix;
    std::array<int, 4> data{};
    std::array<int, 2> anc1{};
    std::array<int, 3> anc2{};
    std::function<bool(const BitMap&)> outer;    // whole unit gated (null = always)
    std::string outer_desc;
    std::function<bool(const BitMap&)> r_extra;  // extra phase-recovery trigger
    std::string r_extra_desc;
    std::function<int(const BitMap&)> z_fallback;  // Z target when own parities trivial
    std::string z_desc;
    // Unit audits an X flip of data[2],data[3]: a pre-flip damp reads inverted
    // in the second round, so the round alone is ambiguous.  The copy-mismatch
    // bits name the damped qubit directly; when set they drive the correction.
    std::array<std::string, 2> audit_bits{};
};

std::function<bool(const BitMap&)> ec_cond_part1(const EcOptions& o) {
    auto outer = o.outer;
    if (!outer) return nullptr;
    return outer;
}

bool ec_triggered(const BitMap& b, const std::string& prefix) {
    return (bit_val(b, prefix + "s") == 1) != (bit_val(b, prefix + "t") == 1);
}

std::function<bool(const BitMap&)> ec_cond_part2(const EcOptions& o) {
    auto outer = o.outer;
    std::string prefix = o.prefix;
    return [outer, prefix](const BitMap& b) {
        if (outer && !outer(b)) return false;
        return ec_triggered(b, prefix);
    };
}

std::function<bool(const BitMap&)> ec_cond_recovery(const EcOptions& o) {
    auto outer = o.outer;
    auto extra = o.r_extra;
    std::string prefix = o.prefix;
    return [outer, extra, prefix](const BitMap& b) {
        if (outer && !outer(b)) return false;
        if (ec_triggered(b, prefix)) return true;
        return extra && extra(b);
    };
}

// Second-round readout of the triggered pair; the damped qubit reads 0.
// (0,1) -> first qubit of the pair, (1,0) -> second, otherwise no correction.
std::function<int(const BitMap&)> ec_x_resolver(const EcOptions& o) {
    std::string prefix = o.prefix;
    std::array<int, 4> data = o.data;
    std::array<std::string, 2> audit = o.audit_bits;
    return [prefix, data, audit](const BitMap& b) -> int {
        int r1 = bit_val(b, prefix + "u"), r2 = bit_val(b, prefix + "h");
        bool first_pair = r1 >= 0;
        if (!first_pair) {
            r1 = bit_val(b, prefix + "v");
            r2 = bit_val(b, prefix + "g");
            if (r1 >= 0 && !audit[0].empty()) {
                if (bit_val(b, audit[0]) == 1) return data[2];
                if (bit_val(b, audit[1]) == 1) return data[3];
                return -1;
            }
        }
        if (r1 < 0) return -1;
        if (r1 == 0 && r2 == 1) return first_pair ? data[0] : data[2];
        if (r1 == 1 && r2 == 0) return first_pair ? data[1] : data[3];
        return -1;
    };
}

std::function<int(const BitMap&)> ec_z_resolver(const EcOptions& o) {
    std::string prefix = o.prefix;
    std::array<int, 4> data = o.data;
    auto fallback = o.z_fallback;
    return [prefix, data, fallback](const BitMap& b) -> int {
        if (bit_val(b, prefix + "c") != 1) return -1;
        if (bit_val(b, prefix + "s") == 1) return data[0];
        if (bit_val(b, prefix + "t") == 1) return data[2];
        return fallback ? fallback(b) : -1;
    };
}

// k-th data wire excluding the resolved target (exclude data[0] when the
// target resolves to nothing, keeping the location count fixed).
std::function<int(const BitMap&)> complement_resolver(std::array<int, 4> data,
                                                      std::function<int(const BitMap&)> primary,
                                                      int k) {
    return [data, primary, k](const BitMap& b) -> int {
        int ex = primary ? primary(b) : -1;
        if (ex < 0) ex = data[0];
        int cnt = 0;
        for (int d : data) {
            if (d == ex) continue;
            if (cnt == k) return d;
            ++cnt;
        }
        return -1;
    };
}

void append_ec_part1(GadgetGraph& g, const EcOptions& o, int& t) {
    auto c1 = ec_cond_part1(o);
    auto D = [&](Location& L) {
        L.cond = c1;
        L.cond_desc = o.outer_desc;
        return &L;
    };
    const auto& d = o.data;
    D(add(g, LocKind::cnot, t, 1, d[0], o.anc1[0], o.prefix));
    D(add(g, LocKind::cnot, t, 1, d[3], o.anc1[1], o.prefix));
    D(add(g, LocKind::rest, t, 1, d[1], -1, o.prefix));
    D(add(g, LocKind::rest, t, 1, d[2], -1, o.prefix));
    ++t;
    D(add(g, LocKind::cnot, t, 1, d[1], o.anc1[0], o.prefix));
    D(add(g, LocKind::cnot, t, 1, d[2], o.anc1[1], o.prefix));
    D(add(g, LocKind::rest, t, 1, d[0], -1, o.prefix));
    D(add(g, LocKind::rest, t, 1, d[3], -1, o.prefix));
    ++t;
    D(add(g, LocKind::measZ, t, 1, o.anc1[0], -1, o.prefix))->emits = o.prefix + "s";
    D(add(g, LocKind::measZ, t, 1, o.anc1[1], -1, o.prefix))->emits = o.prefix + "t";
    for (int i = 0; i < 4; ++i) D(add(g, LocKind::rest, t, 1, d[i], -1, o.prefix));
    ++t;
    g.halt_pairs.push_back({o.prefix + "s", o.prefix + "t"});
    g.ec_prefixes.push_back(o.prefix);
}

void append_ec_part2a(GadgetGraph& g, const EcOptions& o, int& t) {
    auto c2 = ec_cond_part2(o);
    std::string prefix = o.prefix;
    auto d = o.data;
    auto D = [&](Location& L) {
        L.cond = c2;
        L.cond_desc = o.outer_desc + "[" + prefix + "s^" + prefix + "t]";
        return &L;
    };
    // Second round copies the values of the flagged pair; the other pair rests.
    auto pick = [prefix, d](int if_s, int if_t) {
        return [prefix, d, if_s, if_t](const BitMap& b) {
            return bit_val(b, prefix + "s") == 1 ? d[if_s] : d[if_t];
        };
    };
    D(add(g, LocKind::cnot, t, 2, -1, o.anc2[0], o.prefix))->resolve = pick(0, 2);
    D(add(g, LocKind::cnot, t, 2, -1, o.anc2[1], o.prefix))->resolve = pick(1, 3);
    D(add(g, LocKind::rest, t, 2, -1, -1, o.prefix))->resolve = pick(2, 0);
    D(add(g, LocKind::rest, t, 2, -1, -1, o.prefix))->resolve = pick(3, 1);
    ++t;
    {
        Location* L = D(add(g, LocKind::measZ, t, 2, o.anc2[0], -1, o.prefix));
        L->emits = prefix + "u";
        L->emits_alt = prefix + "v";
        L->alt_when_zero = prefix + "s";
    }
    {
        Location* L = D(add(g, LocKind::measZ, t, 2, o.anc2[1], -1, o.prefix));
        L->emits = prefix + "h";
        L->emits_alt = prefix + "g";
        L->alt_when_zero = prefix + "s";
    }
    for (int i = 0; i < 4; ++i) D(add(g, LocKind::rest, t, 2, d[i], -1, o.prefix));
    ++t;
}

void append_ec_part2b(GadgetGraph& g, const EcOptions& o, int& t) {
    auto c2 = ec_cond_part2(o);
    auto cr = ec_cond_recovery(o);
    auto d = o.data;
    auto xres = ec_x_resolver(o);
    auto zres = ec_z_resolver(o);
    std::string rdesc = o.outer_desc + "[" + o.prefix + "R]" +
                        (o.r_extra_desc.empty() ? "" : "|" + o.r_extra_desc);
    auto D2 = [&](Location& L) {
        L.cond = c2;
        L.cond_desc = o.outer_desc + "[" + o.prefix + "s^" + o.prefix + "t]";
        return &L;
    };
    auto DR = [&](Location& L) {
        L.cond = cr;
        L.cond_desc = rdesc;
        return &L;
    };
    D2(add(g, LocKind::x, t, 2, -1, -1, o.prefix))->resolve = xres;
    DR(add(g, LocKind::prepPlus, t, 2, o.anc2[2], -1, o.prefix));
    for (int k = 0; k < 3; ++k)
        DR(add(g, LocKind::rest, t, 2, -1, -1, o.prefix))->resolve =
            complement_resolver(d, xres, k);
    ++t;
    for (int i = 0; i < 4; ++i)
        DR(add(g, LocKind::cnot, t, 2, o.anc2[2], d[i], o.prefix));
    ++t;
    DR(add(g, LocKind::measX, t, 2, o.anc2[2], -1, o.prefix))->emits = o.prefix + "c";
    for (int i = 0; i < 4; ++i) DR(add(g, LocKind::rest, t, 2, d[i], -1, o.prefix));
    ++t;
    {
        Location* L = DR(add(g, LocKind::z, t, 2, -1, -1, o.prefix));
        L->resolve = zres;
        L->cond_desc += o.z_desc.empty() ? "" : " z:" + o.z_desc;
    }
    for (int k = 0; k < 3; ++k)
        DR(add(g, LocKind::rest, t, 2, -1, -1, o.prefix))->resolve =
            complement_resolver(d, zres, k);
    ++t;
}

void append_ec_full(GadgetGraph& g, const EcOptions& o, int& t) {
    append_ec_part1(g, o, t);
    append_ec_part2a(g, o, t);
    append_ec_part2b(g, o, t);
}

std::vector<Wire> block_wires(int n_blocks) {
    std::vector<Wire> w;
    for (int b = 1; b <= n_blocks; ++b)
        for (int q = 1; q <= 4; ++q) {
            std::string nm = n_blocks == 1 ? "d" + std::to_string(q)
                                           : "b" + std::to_string(b) + "q" + std::to_string(q);
            w.push_back({nm, true, -1});
        }
    return w;
}

void add_ec_ancillas(GadgetGraph& g) {
    for (const char* nm : {"a1", "a2", "a3", "a4", "a5"}) g.wires.push_back({nm, false, -1});
}

GadgetGraph build_ec_unit() {
    GadgetGraph g;
    g.name = "ec_unit";
    g.wires = block_wires(1);
    add_ec_ancillas(g);
    g.data_wires = {0, 1, 2, 3};
    g.n_blocks = 1;
    EcOptions o;
    o.prefix = "ec.";
    o.data = {0, 1, 2, 3};
    o.anc1 = {4, 5};
    o.anc2 = {6, 7, 8};
    int t = 0;
    append_ec_full(g, o, t);
    g.syndrome_prefix = "ec.";
    g.notes = {"part 1: pairwise parity extraction (s: q1q2, t: q3q4); s=t=1 stops the run",
               "part 2: second round locates the damped qubit, X restores it, the"
               " phase-recovery section rebuilds the codeword superposition"};
    finalize_labels(g);
    return g;
}

GadgetGraph build_memory() {
    GadgetGraph g;
    g.name = "memory";
    g.wires = block_wires(1);
    add_ec_ancillas(g);
    g.data_wires = {0, 1, 2, 3};
    g.n_blocks = 1;
    int t = 0;
    EcOptions o;
    o.data = {0, 1, 2, 3};
    o.anc1 = {4, 5};
    o.anc2 = {6, 7, 8};
    o.prefix = "ec1.";
    append_ec_full(g, o, t);
    for (int i = 0; i < 4; ++i) add(g, LocKind::rest, t, 0, i, -1, "store.");
    ++t;
    o.prefix = "ec2.";
    append_ec_full(g, o, t);
    g.syndrome_prefix = "ec1.";
    g.notes = {"one storage step (4 rests) bracketed by two correction units"};
    finalize_labels(g);
    return g;
}

GadgetGraph build_recovery_r() {
    GadgetGraph g;
    g.name = "recovery_R";
    g.wires = block_wires(1);
    g.wires.push_back({"a", false, -1});
    g.data_wires = {0, 1, 2, 3};
    g.n_blocks = 1;
    int t = 0;
    add(g, LocKind::prepPlus, t, 0, 4, -1, "r.");
    for (int i = 0; i < 4; ++i) add(g, LocKind::rest, t, 0, i, -1, "r.");
    ++t;
    for (int i = 0; i < 4; ++i) add(g, LocKind::cnot, t, 0, 4, i, "r.");
    ++t;
    add(g, LocKind::measX, t, 0, 4, -1, "r.").emits = "r.c";
    for (int i = 0; i < 4; ++i) add(g, LocKind::rest, t, 0, i, -1, "r.");
    ++t;
    add(g, LocKind::z, t, 0, -1, -1, "r.").resolve = [](const BitMap& b) {
        return bit_val(b, "r.c") == 1 ? 0 : -1;
    };
    for (int i = 1; i < 4; ++i) add(g, LocKind::rest, t, 0, i, -1, "r.");
    ++t;
    g.syndrome_prefix = "r.";
    g.notes = {"standalone phase-recovery section: measures the all-X parity and"
               " applies Z on q1 when the sign is flipped"};
    finalize_labels(g);
    return g;
}

GadgetGraph build_bell_prep() {
    GadgetGraph g;
    g.name = "bell_prep";
    g.wires = {{"q1", true, -1}, {"q2", true, -1}, {"q3", false, -1}, {"q4", false, -1}};
    g.data_wires = {0, 1};
    g.n_blocks = 0;
    int t = 0;
    add(g, LocKind::h, t, 0, 0);
    add(g, LocKind::rest, t, 0, 1);
    add(g, LocKind::h, t, 0, 2);
    add(g, LocKind::rest, t, 0, 3);
    ++t;
    add(g, LocKind::cnot, t, 0, 0, 1);
    add(g, LocKind::cnot, t, 0, 2, 3);
    ++t;
    // The kept pair acts only as controls from here on, so verifier faults can
    // never write into it; its Z parity folds into bz, its coherence into bx.
    add(g, LocKind::cnot, t, 0, 0, 2);
    add(g, LocKind::cnot, t, 0, 1, 3);
    ++t;
    add(g, LocKind::cnot, t, 0, 2, 3);
    add(g, LocKind::rest, t, 0, 0);
    add(g, LocKind::rest, t, 0, 1);
    ++t;
    add(g, LocKind::h, t, 0, 2);
    add(g, LocKind::rest, t, 0, 0);
    add(g, LocKind::rest, t, 0, 1);
    add(g, LocKind::rest, t, 0, 3);
    ++t;
    add(g, LocKind::measZ, t, 0, 2).emits = "bx";
    add(g, LocKind::measZ, t, 0, 3).emits = "bz";
    add(g, LocKind::rest, t, 0, 0);
    add(g, LocKind::rest, t, 0, 1);
    ++t;
    g.notes = {"second raw pair absorbs the kept pair's parity and is Bell-measured;"
               " accepted only on the (0,0) outcome"};
    finalize_labels(g);
    return g;
}

GadgetGraph build_xbar_meas() {
    GadgetGraph g;
    g.name = "xbar_meas";
    g.wires = block_wires(1);
    g.wires.push_back({"a1", false, 5});
    g.wires.push_back({"a2", false, 4});
    g.data_wires = {0, 1, 2, 3};
    g.n_blocks = 1;
    int t = 0;
    add(g, LocKind::cnot, t, 0, 4, 0);
    add(g, LocKind::cnot, t, 0, 5, 1);
    add(g, LocKind::rest, t, 0, 2);
    add(g, LocKind::rest, t, 0, 3);
    ++t;
    add(g, LocKind::cnot, t, 0, 0, 1);
    add(g, LocKind::cnot, t, 0, 2, 3);
    add(g, LocKind::cnot, t, 0, 4, 5);
    ++t;
    add(g, LocKind::h, t, 0, 0);
    add(g, LocKind::h, t, 0, 2);
    add(g, LocKind::h, t, 0, 4);
    ++t;
    add(g, LocKind::measZ, t, 0, 0).emits = "m12x";
    add(g, LocKind::measZ, t, 0, 1).emits = "m12z";
    add(g, LocKind::measZ, t, 0, 2).emits = "m34x";
    add(g, LocKind::measZ, t, 0, 3).emits = "m34z";
    add(g, LocKind::measZ, t, 0, 4).emits = "max";
    add(g, LocKind::measZ, t, 0, 5).emits = "maz";
    ++t;
    g.notes = {"Bell-pair ancilla copies the logical X eigenvalue; all three pairs are"
               " Bell-decoded and the x bits vote, z bits flag damped pairs"};
    finalize_labels(g);
    return g;
}

GadgetGraph build_zbar_meas() {
    GadgetGraph g;
    g.name = "zbar_meas";
    g.wires = block_wires(1);
    g.data_wires = {0, 1, 2, 3};
    g.n_blocks = 1;
    for (int i = 0; i < 4; ++i)
        add(g, LocKind::measZ, 0, 0, i).emits = "z" + std::to_string(i + 1);
    g.notes = {"transversal readout; the ones-count separates the codeword supports"
               " under at most one lying or damped qubit"};
    finalize_labels(g);
    return g;
}

GadgetGraph build_logical_x() {
    GadgetGraph g;
    g.name = "logical_x";
    g.wires = block_wires(1);
    for (const char* nm : {"a5", "a6", "p1", "p2", "r"}) g.wires.push_back({nm, false, -1});
    g.data_wires = {0, 1, 2, 3};
    g.n_blocks = 1;

    auto trig = [](const BitMap& b) {
        return bit_val(b, "xg.s") == 1 || bit_val(b, "xg.t") == 1;
    };
    auto triv = [](const BitMap& b) {
        return bit_val(b, "xg.s") == 0 && bit_val(b, "xg.t") == 0;
    };
    auto T = [&](Location& L) {
        L.cond = trig;
        L.cond_desc = "[xg.s|xg.t]";
        return &L;
    };
    auto V = [&](Location& L) {
        L.cond = triv;
        L.cond_desc = "[!xg.s&!xg.t]";
        return &L;
    };

    int t = 0;
    // Copy the acted-on pair (q3,q4 carry the logical flip) into fresh ancillas.
    add(g, LocKind::cnot, t, 0, 2, 4, "xg.");
    add(g, LocKind::cnot, t, 0, 3, 5, "xg.");
    add(g, LocKind::rest, t, 0, 0, -1, "xg.");
    add(g, LocKind::rest, t, 0, 1, -1, "xg.");
    ++t;
    // Parity of the pair and of its copy.
    add(g, LocKind::cnot, t, 0, 2, 6, "xg.");
    add(g, LocKind::cnot, t, 0, 4, 7, "xg.");
    for (int i : {0, 1, 3, 5}) add(g, LocKind::rest, t, 0, i, -1, "xg.");
    ++t;
    add(g, LocKind::cnot, t, 0, 3, 6, "xg.");
    add(g, LocKind::cnot, t, 0, 5, 7, "xg.");
    for (int i : {0, 1, 2, 4}) add(g, LocKind::rest, t, 0, i, -1, "xg.");
    ++t;
    add(g, LocKind::measZ, t, 0, 6, -1, "xg.").emits = "xg.s";
    add(g, LocKind::measZ, t, 0, 7, -1, "xg.").emits = "xg.t";
    for (int i : {0, 1, 2, 3, 4, 5}) add(g, LocKind::rest, t, 0, i, -1, "xg.");
    ++t;

    // Nontrivial parity: locate the damp, flip every pair qubit reading 1, and
    // rebuild the superposition with the phase-recovery section.
    T(add(g, LocKind::cnot, t, 0, 2, 6, "xg."));
    T(add(g, LocKind::cnot, t, 0, 3, 7, "xg."));
    T(add(g, LocKind::measZ, t, 0, 4, -1, "xg."))->emits = "xg.da";
    T(add(g, LocKind::measZ, t, 0, 5, -1, "xg."))->emits = "xg.db";
    T(add(g, LocKind::rest, t, 0, 0, -1, "xg."));
    T(add(g, LocKind::rest, t, 0, 1, -1, "xg."));
    ++t;
    T(add(g, LocKind::measZ, t, 0, 6, -1, "xg."))->emits = "xg.u";
    T(add(g, LocKind::measZ, t, 0, 7, -1, "xg."))->emits = "xg.h";
    for (int i : {0, 1, 2, 3}) T(add(g, LocKind::rest, t, 0, i, -1, "xg."));
    ++t;
    T(add(g, LocKind::x, t, 0, -1, -1, "xg."))->resolve = [](const BitMap& b) {
        return bit_val(b, "xg.u") == 1 ? 2 : -1;
    };
    T(add(g, LocKind::x, t, 0, -1, -1, "xg."))->resolve = [](const BitMap& b) {
        return bit_val(b, "xg.h") == 1 ? 3 : -1;
    };
    T(add(g, LocKind::prepPlus, t, 0, 8, -1, "xg."));
    T(add(g, LocKind::rest, t, 0, 0, -1, "xg."));
    T(add(g, LocKind::rest, t, 0, 1, -1, "xg."));
    ++t;
    for (int i : {0, 1, 2, 3}) T(add(g, LocKind::cnot, t, 0, 8, i, "xg."));
    ++t;
    T(add(g, LocKind::measX, t, 0, 8, -1, "xg."))->emits = "xg.c";
    for (int i : {0, 1, 2, 3}) T(add(g, LocKind::rest, t, 0, i, -1, "xg."));
    ++t;
    auto zres_x = [](const BitMap& b) { return bit_val(b, "xg.c") == 1 ? 2 : -1; };
    T(add(g, LocKind::z, t, 0, -1, -1, "xg."))->resolve = zres_x;
    for (int k = 0; k < 3; ++k)
        T(add(g, LocKind::rest, t, 0, -1, -1, "xg."))->resolve =
            complement_resolver({0, 1, 2, 3}, zres_x, k);
    ++t;

    // Trivial parity: apply the pair flips, re-cancel the copies, and verify;
    // a discrepancy hands the block to a full correction unit.
    for (int i : {2, 3, 4, 5}) V(add(g, LocKind::x, t, 0, i, -1, "xg."));
    V(add(g, LocKind::rest, t, 0, 0, -1, "xg."));
    V(add(g, LocKind::rest, t, 0, 1, -1, "xg."));
    ++t;
    V(add(g, LocKind::cnot, t, 0, 2, 4, "xg."));
    V(add(g, LocKind::cnot, t, 0, 3, 5, "xg."));
    V(add(g, LocKind::rest, t, 0, 0, -1, "xg."));
    V(add(g, LocKind::rest, t, 0, 1, -1, "xg."));
    ++t;
    V(add(g, LocKind::measZ, t, 0, 4, -1, "xg."))->emits = "xg.x";
    V(add(g, LocKind::measZ, t, 0, 5, -1, "xg."))->emits = "xg.y";
    for (int i : {0, 1, 2, 3}) V(add(g, LocKind::rest, t, 0, i, -1, "xg."));
    ++t;

    EcOptions o;
    o.prefix = "ecp.";
    o.data = {0, 1, 2, 3};
    o.anc1 = {6, 7};
    o.anc2 = {6, 7, 8};
    o.outer = [](const BitMap& b) {
        return bit_val(b, "xg.x") == 1 || bit_val(b, "xg.y") == 1;
    };
    o.outer_desc = "[xg.x|xg.y]";
    // Entering with trivial parities still means a half-collapsed codeword:
    // the recovery section must rebuild it.
    o.r_extra = [](const BitMap& b) {
        return bit_val(b, "ecp.s") == 0 && bit_val(b, "ecp.t") == 0;
    };
    o.r_extra_desc = "[!ecp.s&!ecp.t]";
    o.z_fallback = [](const BitMap&) { return 2; };
    o.z_desc = "trivial-entry fallback q3";
    o.audit_bits = {"xg.x", "xg.y"};
    append_ec_full(g, o, t);

    g.syndrome_prefix = "xg.";
    g.notes = {"logical flip acts on the q3q4 pair (equivalent to the q1q2 pair"
               " modulo the all-X stabilizer)",
               "ancilla copies audit the flip; in the audit-triggered correction"
               " unit the mismatch bits name the damped qubit (the second round"
               " alone is ambiguous across the flip) and the recovery section"
               " runs even on trivial parities"};
    finalize_labels(g);
    return g;
}

// Crossed coupling realizing the entangling logical gate: the phase
// (-1)^(xA*xB) with x = q1 xor q4 needs one coupler per qubit connecting the
// middle qubits across pairs. Plain i-to-i coupling is a logical identity.
constexpr int kCzPartner[4] = {0, 2, 1, 3};  // block-2 qubit coupled to block-1 qubit i

std::function<int(const BitMap&)> cross_z_fallback(const std::string& partner,
                                                   std::array<int, 4> data) {
    return [partner, data](const BitMap& b) -> int {
        int r1 = bit_val(b, partner + "u"), r2 = bit_val(b, partner + "h");
        if (r1 < 0) {
            r1 = bit_val(b, partner + "v");
            r2 = bit_val(b, partner + "g");
        }
        if (r1 == 0 && r2 == 1) return data[0];
        if (r1 == 1 && r2 == 0) return data[2];
        return -1;
    };
}

std::function<bool(const BitMap&)> cross_trigger(const std::string& partner,
                                                 const std::string& self) {
    return [partner, self](const BitMap& b) {
        return ec_triggered(b, partner) && bit_val(b, self + "s") == 0 &&
               bit_val(b, self + "t") == 0;
    };
}

void append_cz_core(GadgetGraph& g, int& t) {
    for (int i = 0; i < 4; ++i) add(g, LocKind::cz, t, 0, i, 4 + kCzPartner[i], "cz.");
    ++t;

    EcOptions a, b;
    a.prefix = "eca.";
    a.data = {0, 1, 2, 3};
    a.anc1 = {8, 9};
    a.anc2 = {10, 11, 12};
    a.r_extra = cross_trigger("ecb.", "eca.");
    a.r_extra_desc = "[ecb trig & eca triv]";
    a.z_fallback = cross_z_fallback("ecb.", a.data);
    a.z_desc = "partner second round";
    b = a;
    b.prefix = "ecb.";
    b.data = {4, 5, 6, 7};
    b.r_extra = cross_trigger("eca.", "ecb.");
    b.r_extra_desc = "[eca trig & ecb triv]";
    b.z_fallback = cross_z_fallback("eca.", b.data);

    // Physically parallel blocks: both second rounds complete before either
    // recovery section, which reads the partner's outcomes.
    append_ec_part1(g, a, t);
    append_ec_part1(g, b, t);
    append_ec_part2a(g, a, t);
    append_ec_part2a(g, b, t);
    append_ec_part2b(g, a, t);
    append_ec_part2b(g, b, t);
}

void add_two_block_frame(GadgetGraph& g) {
    g.wires = block_wires(2);
    add_ec_ancillas(g);
    g.data_wires = {0, 1, 2, 3, 4, 5, 6, 7};
    g.n_blocks = 2;
}

GadgetGraph build_cz_gadget() {
    GadgetGraph g;
    g.name = "cz_gadget";
    add_two_block_frame(g);
    int t = 0;
    append_cz_core(g, t);
    g.syndrome_prefix = "eca.";
    g.notes = {"couplers (q1,q1) (q2,q3) (q3,q2) (q4,q4): one per qubit, so a damp"
               " hands the partner block exactly one phase error",
               "each trailing unit's recovery section also fires on the partner's"
               " trigger; its Z target follows the partner's second round"};
    finalize_labels(g);
    return g;
}

GadgetGraph build_cz_exrec() {
    GadgetGraph g;
    g.name = "cz_exrec";
    add_two_block_frame(g);
    int t = 0;
    EcOptions o;
    o.anc1 = {8, 9};
    o.anc2 = {10, 11, 12};
    o.prefix = "ec1.";
    o.data = {0, 1, 2, 3};
    append_ec_full(g, o, t);
    o.prefix = "ec2.";
    o.data = {4, 5, 6, 7};
    append_ec_full(g, o, t);
    append_cz_core(g, t);
    g.syndrome_prefix = "ec1.";
    g.notes = {"leading correction unit per block, then the coupler step and the"
               " cross-conditioned trailing units"};
    finalize_labels(g);
    return g;
}

GadgetGraph build_two_block_ec() {
    GadgetGraph g;
    g.name = "__two_block_ec";
    add_two_block_frame(g);
    int t = 0;
    EcOptions o;
    o.anc1 = {8, 9};
    o.anc2 = {10, 11, 12};
    o.prefix = "c1.";
    o.data = {0, 1, 2, 3};
    append_ec_full(g, o, t);
    o.prefix = "c2.";
    o.data = {4, 5, 6, 7};
    append_ec_full(g, o, t);
    g.syndrome_prefix = "c1.";
    finalize_labels(g);
    return g;
}

// ---------------------------------------------------------------------------
// Propagation.

std::vector<SimBranch> run_gadget(const GadgetGraph& g, Vec init,
                                  const std::vector<std::vector<FaultSpec>>& faults_by_loc,
                                  double kraus_p) {
    const int n = static_cast<int>(g.wires.size());
    std::vector<SimBranch> cur;
    cur.push_back({std::move(init), {}, false});

    auto check_halt = [&](SimBranch& sb) {
        for (const auto& hp : g.halt_pairs)
            if (bit_val(sb.bits, hp[0]) == 1 && bit_val(sb.bits, hp[1]) == 1) {
                sb.halted = true;
                return;
            }
    };

    for (size_t li = 0; li < g.locs.size(); ++li) {
        const Location& L = g.locs[li];
        const auto& fl = faults_by_loc[li];
        const bool two = (L.kind == LocKind::cnot || L.kind == LocKind::cz);
        const bool meas = (L.kind == LocKind::measZ || L.kind == LocKind::measX);
        std::vector<SimBranch> next;
        next.reserve(cur.size());
        for (auto& br : cur) {
            if (br.halted || (L.cond && !L.cond(br.bits))) {
                next.push_back(std::move(br));
                continue;
            }
            const int w = L.resolve ? L.resolve(br.bits) : L.wire;
            const int w2 = L.resolve2 ? L.resolve2(br.bits) : L.wire2;
            if (w < 0 || (two && w2 < 0)) {
                next.push_back(std::move(br));
                continue;
            }
            const long m = wire_mask(n, w);
            const long m2 = two ? wire_mask(n, w2) : 0;

            std::vector<SimBranch> stage;
            stage.push_back(std::move(br));

            auto apply_faults = [&]() {
                for (const FaultSpec& f : fl) {
                    std::vector<long> fm;
                    if (two && f.placement == 1) fm = {m2};
                    else if (two && f.placement == 2) fm = {m, m2};
                    else fm = {m};
                    for (long fmask : fm) {
                        if (f.kind == FaultSpec::phase) {
                            for (auto& sb : stage) op_z(sb.a, fmask);
                        } else if (kraus_p > 0.0) {
                            std::vector<SimBranch> ns;
                            ns.reserve(stage.size() * 2);
                            for (auto& sb : stage) {
                                SimBranch ev = sb;  // damping event
                                op_damp(ev.a, fmask);
                                ev.a *= std::sqrt(kraus_p);
                                op_e0(sb.a, fmask, kraus_p);
                                ns.push_back(std::move(sb));
                                if (ev.a.squaredNorm() >= kPrune) ns.push_back(std::move(ev));
                            }
                            stage = std::move(ns);
                        } else {
                            for (auto& sb : stage) op_damp(sb.a, fmask);
                        }
                    }
                }
            };

            if (meas) {
                apply_faults();  // readout faults act before the measurement
                for (auto& sb : stage) {
                    if (L.kind == LocKind::measX) op_h(sb.a, m);
                    const std::string name =
                        (!L.alt_when_zero.empty() && bit_val(sb.bits, L.alt_when_zero) == 0)
                            ? L.emits_alt
                            : L.emits;
                    SimBranch b1;
                    b1.bits = sb.bits;
                    b1.a = Vec::Zero(sb.a.size());
                    for (long i = 0; i < sb.a.size(); ++i)
                        if (!(i & m)) {
                            b1.a[i] = sb.a[i | m];  // collapse, wire reset to |0>
                            sb.a[i | m] = 0.0;
                        }
                    sb.bits[name] = 0;
                    b1.bits[name] = 1;
                    check_halt(sb);
                    check_halt(b1);
                    if (sb.a.squaredNorm() >= kPrune) next.push_back(std::move(sb));
                    if (b1.a.squaredNorm() >= kPrune) next.push_back(std::move(b1));
                }
                continue;
            }

            for (auto& sb : stage) {
                switch (L.kind) {
                    case LocKind::prep0:
                    case LocKind::rest: break;
                    case LocKind::prepPlus:
                    case LocKind::h: op_h(sb.a, m); break;
                    case LocKind::x: op_x(sb.a, m); break;
                    case LocKind::z: op_z(sb.a, m); break;
                    case LocKind::cnot: op_cnot(sb.a, m, m2); break;
                    case LocKind::cz: op_cz(sb.a, m, m2); break;
                    default: break;
                }
            }
            apply_faults();
            for (auto& sb : stage)
                if (sb.a.squaredNorm() >= kPrune) next.push_back(std::move(sb));
        }
        cur = std::move(next);
    }
    return cur;
}

const Vec& logical_codeword(int x) {
    static const Codespace code = leung_code();
    return code.codewords[x];
}

Vec vkron(const Vec& a, const Vec& b) {
    Vec out(a.size() * b.size());
    for (long i = 0; i < a.size(); ++i)
        for (long j = 0; j < b.size(); ++j) out[i * b.size() + j] = a[i] * b[j];
    return out;
}

// Joint logical amplitudes (block 1 = most significant bit) to the physical
// encoding on 4*n_blocks qubits.
Vec encode_blocks(const Vec& logical, int n_blocks) {
    const long nl = 1L << n_blocks;
    Vec out = Vec::Zero(1L << (4 * n_blocks));
    for (long x = 0; x < nl; ++x) {
        if (logical[x] == cxd(0.0, 0.0)) continue;
        Vec term = logical_codeword((x >> (n_blocks - 1)) & 1);
        for (int b = 1; b < n_blocks; ++b)
            term = vkron(term, logical_codeword((x >> (n_blocks - 1 - b)) & 1));
        out += logical[x] * term;
    }
    return out;
}

double fidelity_abs(const Vec& a, const Vec& b) { return std::abs(a.dot(b)); }

void fill_syndromes(const GadgetGraph& g, const BitMap& bits, SyndromeOutcome& s) {
    const std::string& p = g.syndrome_prefix;
    s.s = bit_val(bits, p + "s");
    s.t = bit_val(bits, p + "t");
    s.u = bit_val(bits, p + "u");
    s.h = bit_val(bits, p + "h");
    s.v = bit_val(bits, p + "v");
    s.g = bit_val(bits, p + "g");
    s.c = bit_val(bits, p + "c");
}

std::string decode_xbar(const BitMap& bits) {
    const int x12 = bit_val(bits, "m12x"), z12 = bit_val(bits, "m12z");
    const int x34 = bit_val(bits, "m34x"), z34 = bit_val(bits, "m34z");
    const int xa = bit_val(bits, "max"), za = bit_val(bits, "maz");
    const bool f12 = z12 == 1, f34 = z34 == 1, fa = za == 1;
    auto sign = [](int x) { return x == 1 ? std::string("-") : std::string("+"); };
    if (f12 || f34) {
        // The ancilla copy is entangled with a flagged pair's collapse: drop it.
        if (f12 && f34) return "flagged";
        return sign(f12 ? x34 : x12);
    }
    if (fa) return x12 == x34 ? sign(x12) : "flagged";
    return sign(x12 + x34 + xa >= 2);
}

std::string decode_zbar(const BitMap& bits) {
    int pattern = 0, ones = 0;
    for (int i = 0; i < 4; ++i) {
        const int z = bit_val(bits, "z" + std::to_string(i + 1));
        pattern = (pattern << 1) | (z == 1);
        ones += z == 1;
    }
    if (ones == 0 || ones == 3 || ones == 4) return "0";
    if (ones == 1 || pattern == 0b1100 || pattern == 0b0011) return "1";
    return "flagged";  // 2-2 split off the codeword supports: not single-fault reachable
}

std::vector<BranchOutcome> finalize_branches(const GadgetGraph& g,
                                             std::vector<SimBranch>&& branches) {
    const int n = static_cast<int>(g.wires.size());
    const int nd = static_cast<int>(g.data_wires.size());
    std::vector<long> dmask(nd);
    for (int j = 0; j < nd; ++j) dmask[j] = wire_mask(n, g.data_wires[j]);
    long anc_mask = 0;
    for (int w = 0; w < n; ++w) {
        bool is_data = std::find(g.data_wires.begin(), g.data_wires.end(), w) !=
                       g.data_wires.end();
        if (!is_data) anc_mask |= wire_mask(n, w);
    }

    std::vector<BranchOutcome> out;
    out.reserve(branches.size());
    for (auto& br : branches) {
        BranchOutcome o;
        o.probability = br.a.squaredNorm();
        o.bits = br.bits;
        o.halted = br.halted;
        Vec s = Vec::Zero(1L << nd);
        for (long gi = 0; gi < br.a.size(); ++gi) {
            if ((gi & anc_mask) || br.a[gi] == cxd(0.0, 0.0)) continue;
            long k = 0;
            for (int j = 0; j < nd; ++j)
                if (gi & dmask[j]) k |= 1L << (nd - 1 - j);
            s[k] = br.a[gi];
        }
        const double sn = s.squaredNorm();
        if (sn > 1e-20)
            s /= std::sqrt(sn);
        else
            s.resize(0);
        o.state = std::move(s);
        fill_syndromes(g, br.bits, o.syndromes);
        if (g.name == "bell_prep") {
            o.rejected = !(bit_val(br.bits, "bx") == 0 && bit_val(br.bits, "bz") == 0);
            o.verdict = o.rejected ? "reject" : "accept";
        } else if (g.name == "xbar_meas") {
            o.verdict = decode_xbar(br.bits);
        } else if (g.name == "zbar_meas") {
            o.verdict = decode_zbar(br.bits);
        }
        out.push_back(std::move(o));
    }
    return out;
}

Vec initial_state(const GadgetGraph& g, const Vec& input_logical) {
    const int n = static_cast<int>(g.wires.size());
    const long dim = 1L << n;
    Vec init = Vec::Zero(dim);
    init[0] = 1.0;
    for (int w = 0; w < n; ++w) {
        const int p = g.wires[w].bell_partner;
        if (p > w) {
            Vec flipped = init;
            op_x(flipped, wire_mask(n, w));
            op_x(flipped, wire_mask(n, p));
            init = (init + flipped) / std::sqrt(2.0);
        }
    }
    if (g.n_blocks > 0) {
        if (input_logical.size() != (1L << g.n_blocks))
            throw std::invalid_argument(
                "inject_and_propagate: input_logical needs 2^n_blocks amplitudes");
        const int nd = static_cast<int>(g.data_wires.size());
        Vec enc = encode_blocks(input_logical, g.n_blocks);
        std::vector<long> dmask(nd);
        for (int j = 0; j < nd; ++j) dmask[j] = wire_mask(n, g.data_wires[j]);
        Vec full = Vec::Zero(dim);
        for (long gi = 0; gi < dim; ++gi) {
            if (init[gi] == cxd(0.0, 0.0)) continue;
            for (long k = 0; k < enc.size(); ++k) {
                if (enc[k] == cxd(0.0, 0.0)) continue;
                long tgt = gi;
                for (int j = 0; j < nd; ++j)
                    if ((k >> (nd - 1 - j)) & 1) tgt |= dmask[j];
                full[tgt] += init[gi] * enc[k];
            }
        }
        init = std::move(full);
    } else if (input_logical.size() != 0) {
        throw std::invalid_argument(
            "inject_and_propagate: preparation gadgets take no logical input");
    }
    return init;
}

}  // namespace

int GadgetGraph::census(LocKind k) const {
    int c = 0;
    for (const auto& L : locs) c += L.kind == k;
    return c;
}

int GadgetGraph::total_locations() const { return static_cast<int>(locs.size()); }

int GadgetGraph::part_locations(int part) const {
    int c = 0;
    for (const auto& L : locs) c += L.part == part;
    return c;
}

GadgetGraph build_gadget(const std::string& name) {
    if (name == "ec_unit") return build_ec_unit();
    if (name == "recovery_R") return build_recovery_r();
    if (name == "memory") return build_memory();
    if (name == "bell_prep") return build_bell_prep();
    if (name == "xbar_meas") return build_xbar_meas();
    if (name == "zbar_meas") return build_zbar_meas();
    if (name == "logical_x") return build_logical_x();
    if (name == "cz_gadget") return build_cz_gadget();
    if (name == "cz_exrec") return build_cz_exrec();
    throw std::invalid_argument("build_gadget: unknown gadget '" + name + "'");
}

std::vector<BranchOutcome> inject_and_propagate(const GadgetGraph& g, const Vec& input_logical,
                                                const std::vector<FaultSpec>& faults,
                                                const std::vector<int>& input_damps,
                                                double kraus_p) {
    std::vector<std::vector<FaultSpec>> fbl(g.locs.size());
    for (const auto& f : faults) {
        if (f.location < 0 || f.location >= static_cast<int>(g.locs.size()))
            throw std::out_of_range("inject_and_propagate: fault location out of range");
        const LocKind k = g.locs[f.location].kind;
        const bool two = (k == LocKind::cnot || k == LocKind::cz);
        if (f.placement < 0 || f.placement > (two ? 2 : 0))
            throw std::invalid_argument("inject_and_propagate: bad fault placement");
        fbl[f.location].push_back(f);
    }
    Vec init = initial_state(g, input_logical);
    const int n = static_cast<int>(g.wires.size());
    for (int q : input_damps) {
        if (q < 0 || q >= static_cast<int>(g.data_wires.size()))
            throw std::out_of_range("inject_and_propagate: input damp index out of range");
        op_damp(init, wire_mask(n, g.data_wires[q]));
    }
    const double n2 = init.squaredNorm();
    if (n2 < 1e-18) return {};
    init /= std::sqrt(n2);
    return finalize_branches(g, run_gadget(g, std::move(init), fbl, kraus_p));
}

bool check_correctable(const Vec& state, const Vec& target_logical) {
    int nb;
    if (state.size() == 16 && target_logical.size() == 2)
        nb = 1;
    else if (state.size() == 256 && target_logical.size() == 4)
        nb = 2;
    else
        throw std::invalid_argument(
            "check_correctable: state must hold 16 amplitudes per block with a matching "
            "logical target");
    static const GadgetGraph g1 = build_ec_unit();
    static const GadgetGraph g2 = build_two_block_ec();
    const GadgetGraph& g = nb == 1 ? g1 : g2;
    const int n = static_cast<int>(g.wires.size());
    const int nd = 4 * nb;

    Vec st = state;
    const double n2 = st.squaredNorm();
    if (n2 < 1e-18) return false;
    st /= std::sqrt(n2);
    Vec init = Vec::Zero(1L << n);
    for (long k = 0; k < st.size(); ++k) init[k << (n - nd)] = st[k];

    Vec enc = encode_blocks(target_logical, nb);
    enc /= enc.norm();

    std::vector<std::vector<FaultSpec>> nofaults(g.locs.size());
    auto branches = run_gadget(g, std::move(init), nofaults, -1.0);
    auto outcomes = finalize_branches(g, std::move(branches));
    for (const auto& o : outcomes) {
        if (o.halted) return false;
        if (o.state.size() == 0 || fidelity_abs(o.state, enc) < 1.0 - kFidTol) return false;
    }
    return !outcomes.empty();
}

namespace {

struct LogicalInput {
    Vec amps;
    std::string label;
};

std::vector<LogicalInput> one_block_inputs() {
    const double r = 1.0 / std::sqrt(2.0);
    std::vector<LogicalInput> v;
    v.push_back({(Vec(2) << 1, 0).finished(), "0L"});
    v.push_back({(Vec(2) << 0, 1).finished(), "1L"});
    v.push_back({(Vec(2) << r, r).finished(), "+L"});
    v.push_back({(Vec(2) << r, -r).finished(), "-L"});
    return v;
}

std::vector<int> placements_for(LocKind k) {
    if (k == LocKind::cnot || k == LocKind::cz) return {0, 1, 2};
    return {0};
}

}  // namespace

PropertyReport verify_property(const std::string& gadget_name, const std::string& property_id) {
    static const std::map<std::string, std::vector<std::string>> allowed = {
        {"P1", {"ec_unit"}},
        {"P2", {"ec_unit"}},
        {"P3", {"bell_prep"}},
        {"P4", {"xbar_meas", "zbar_meas"}},
        {"P5", {"logical_x", "cz_gadget"}}};
    auto it = allowed.find(property_id);
    if (it == allowed.end())
        throw std::invalid_argument("verify_property: unknown property '" + property_id + "'");
    if (std::find(it->second.begin(), it->second.end(), gadget_name) == it->second.end())
        throw std::invalid_argument("verify_property: property " + property_id +
                                    " does not apply to gadget '" + gadget_name + "'");

    const GadgetGraph g = build_gadget(gadget_name);
    PropertyReport rep;
    rep.gadget = gadget_name;
    rep.property = property_id;

    auto fail = [&](const std::vector<FaultSpec>& faults, const std::vector<int>& damps,
                    const std::string& label, const BranchOutcome& br, const std::string& why) {
        if (!rep.pass) return;
        rep.pass = false;
        CaseRecord c;
        c.gadget = gadget_name;
        for (const auto& f : faults) {
            c.fault_locations.push_back(f.location);
            c.placement = f.placement;
        }
        c.kind = faults.empty() ? "none" : "damp";
        c.input_damps = damps;
        c.input_label = label;
        c.syndromes = br.syndromes;
        c.verdict = br.verdict;
        c.pass = false;
        c.detail = why;
        rep.first_counterexample = c;
    };

    using Check = std::function<void(const std::vector<FaultSpec>&, const std::vector<int>&,
                                     const LogicalInput&, const BranchOutcome&)>;
    auto run_case = [&](const std::vector<FaultSpec>& faults, const std::vector<int>& damps,
                        const LogicalInput& in, const Check& check) {
        auto branches = inject_and_propagate(g, in.amps, faults, damps);
        ++rep.cases;
        rep.branches += static_cast<long long>(branches.size());
        for (const auto& br : branches) check(faults, damps, in, br);
    };

    auto all_single_faults = [&]() {
        std::vector<std::vector<FaultSpec>> v;
        v.push_back({});
        for (int li = 0; li < g.total_locations(); ++li)
            for (int pl : placements_for(g.locs[li].kind))
                v.push_back({FaultSpec{li, FaultSpec::damp, pl}});
        return v;
    };

    if (property_id == "P1") {
        for (const auto& in : one_block_inputs()) {
            Vec enc = encode_blocks(in.amps, 1);
            for (const std::vector<int>& damps :
                 std::vector<std::vector<int>>{{}, {0}, {1}, {2}, {3}}) {
                run_case({}, damps, in,
                         [&](const auto& f, const auto& d, const auto& i, const BranchOutcome& br) {
                             if (br.halted) return fail(f, d, i.label, br, "halted without faults");
                             const double fi =
                                 br.state.size() ? fidelity_abs(br.state, enc) : 0.0;
                             if (fi < 1.0 - kFidTol)
                                 fail(f, d, i.label, br,
                                      "logical fidelity " + std::to_string(fi));
                         });
            }
        }
    } else if (property_id == "P2") {
        for (const auto& faults : all_single_faults())
            for (const auto& in : one_block_inputs())
                run_case(faults, {}, in,
                         [&](const auto& f, const auto& d, const auto& i, const BranchOutcome& br) {
                             if (br.halted) return;
                             if (br.state.size() == 0 || !check_correctable(br.state, i.amps))
                                 fail(f, d, i.label, br, "branch not correctable");
                         });
    } else if (property_id == "P3") {
        // Accepted outputs must lie within one damping event of the Bell pair:
        // the intact pair, a direct single-qubit decay image, or a one-qubit
        // collapse residue (the event struck a qubit while in superposition,
        // leaving the projected component).  Coherent X- or Z-type errors are
        // not in this set and must be rejected by the verifier.
        std::vector<Vec> ok_states;
        {
            const double r = 1.0 / std::sqrt(2.0);
            ok_states.push_back((Vec(4) << r, 0, 0, r).finished());   // intact pair
            ok_states.push_back((Vec(4) << 0, 1, 0, 0).finished());   // first qubit decayed
            ok_states.push_back((Vec(4) << 0, 0, 1, 0).finished());   // second qubit decayed
            ok_states.push_back((Vec(4) << 1, 0, 0, 0).finished());   // collapse onto 0-component
            ok_states.push_back((Vec(4) << 0, 0, 0, 1).finished());   // partner-selected 1-component
        }
        LogicalInput none{Vec(0), "none"};
        for (const auto& faults : all_single_faults())
            run_case(faults, {}, none,
                     [&](const auto& f, const auto& d, const auto& i, const BranchOutcome& br) {
                         if (br.rejected) return;
                         double best = 0.0;
                         for (const auto& s : ok_states)
                             if (br.state.size())
                                 best = std::max(best, fidelity_abs(br.state, s));
                         if (best < 1.0 - kFidTol)
                             fail(f, d, i.label, br,
                                  "accepted state off the allowed set, fidelity " +
                                      std::to_string(best));
                     });
    } else if (property_id == "P4") {
        const bool xb = gadget_name == "xbar_meas";
        auto expected = [&](const std::string& label) -> std::string {
            if (xb) return label == "+L" ? "+" : label == "-L" ? "-" : "";
            return label == "0L" ? "0" : label == "1L" ? "1" : "";
        };
        auto check = [&](const auto& f, const auto& d, const LogicalInput& i,
                         const BranchOutcome& br) {
            const std::string want = expected(i.label);
            if (br.verdict == "flagged")
                return fail(f, d, i.label, br, "flagged verdict under a single fault");
            if (!want.empty() && br.verdict != want)
                fail(f, d, i.label, br, "verdict " + br.verdict + " expected " + want);
        };
        for (const auto& in : one_block_inputs()) {
            for (const std::vector<int>& damps :
                 std::vector<std::vector<int>>{{}, {0}, {1}, {2}, {3}})
                run_case({}, damps, in, check);
            for (const auto& faults : all_single_faults())
                if (!faults.empty()) run_case(faults, {}, in, check);
        }
    } else {  // P5
        std::vector<LogicalInput> inputs;
        std::vector<Vec> targets;
        int nd;
        if (gadget_name == "logical_x") {
            nd = 4;
            for (const auto& in : one_block_inputs()) {
                inputs.push_back(in);
                targets.push_back((Vec(2) << in.amps[1], in.amps[0]).finished());
            }
        } else {
            nd = 8;
            auto joint = [](const LogicalInput& a, const LogicalInput& b) {
                LogicalInput j;
                j.amps = vkron(a.amps, b.amps);
                j.label = a.label + b.label;
                return j;
            };
            auto base = one_block_inputs();
            for (auto [i1, i2] : std::vector<std::pair<int, int>>{{0, 0}, {1, 2}, {2, 1}, {2, 2}}) {
                LogicalInput in = joint(base[i1], base[i2]);
                Vec tgt = in.amps;
                tgt[3] = -tgt[3];  // logical phase on the |1L 1L> component
                inputs.push_back(in);
                targets.push_back(tgt);
            }
        }
        std::vector<std::vector<int>> damp_sets{{}};
        for (int q = 0; q < nd; ++q) damp_sets.push_back({q});
        for (size_t ii = 0; ii < inputs.size(); ++ii) {
            const Vec& tgt = targets[ii];
            auto check = [&](const auto& f, const auto& d, const LogicalInput& i,
                             const BranchOutcome& br) {
                if (br.halted) return;
                if (br.state.size() == 0 || !check_correctable(br.state, tgt))
                    fail(f, d, i.label, br, "output not correctable to the ideal action");
            };
            for (const auto& damps : damp_sets) run_case({}, damps, inputs[ii], check);
            for (const auto& faults : all_single_faults())
                if (!faults.empty()) run_case(faults, {}, inputs[ii], check);
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Malignant-pair ledger.

namespace {

long long binomial(long long n, long long k) {
    if (k < 0 || n < 0 || k > n)
        throw std::invalid_argument("eval_count_expression: C(n,k) out of range");
    k = std::min(k, n - k);
    long long r = 1;
    for (long long i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

struct ExprParser {
    const std::string& s;
    size_t i = 0;

    void skip() {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    }
    void expect(char c) {
        skip();
        if (i >= s.size() || s[i] != c)
            throw std::invalid_argument("eval_count_expression: expected '" +
                                        std::string(1, c) + "' in '" + s + "'");
        ++i;
    }
    long long expr() {
        long long v = term();
        skip();
        while (i < s.size() && (s[i] == '+' || s[i] == '-')) {
            const char op = s[i++];
            const long long t = term();
            v = op == '+' ? v + t : v - t;
            skip();
        }
        return v;
    }
    long long term() {
        long long v = factor();
        skip();
        while (i < s.size() && s[i] == '*') {
            ++i;
            v *= factor();
            skip();
        }
        return v;
    }
    long long factor() {
        skip();
        if (i >= s.size())
            throw std::invalid_argument("eval_count_expression: unexpected end of '" + s + "'");
        if (s[i] == '(') {
            ++i;
            const long long v = expr();
            expect(')');
            return v;
        }
        if (s[i] == 'C') {
            ++i;
            expect('(');
            const long long n = expr();
            expect(',');
            const long long k = expr();
            expect(')');
            return binomial(n, k);
        }
        if (std::isdigit(static_cast<unsigned char>(s[i]))) {
            long long v = 0;
            while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i])))
                v = v * 10 + (s[i++] - '0');
            return v;
        }
        throw std::invalid_argument("eval_count_expression: bad token in '" + s + "'");
    }
};

}  // namespace

long long eval_count_expression(const std::string& expr) {
    ExprParser p{expr};
    const long long v = p.expr();
    p.skip();
    if (p.i != expr.size())
        throw std::invalid_argument("eval_count_expression: trailing characters in '" + expr +
                                    "'");
    return v;
}

LedgerReport ledger(const std::string& unit) {
    LedgerReport r;
    r.unit = unit;
    auto E = [&](const std::string& bp, long long c, const std::string& d, bool in_total,
                 const std::string& note) {
        r.entries.push_back({bp, c, d, in_total, note});
    };
    if (unit == "memory") {
        E("within-ec", 268, "2*((C(14,2)-(12+24+1))+4*(28-8))", true,
          "damping pairs inside either correction unit; part-1 pairs minus benign, plus "
          "first-round by second-round products");
        E("rest-pairs", 6, "C(4,2)", false,
          "pairs among the four storage rests; itemized at the source but left out of its "
          "declared total");
        E("ec-rest", 60, "10*3*2", true,
          "ten harmful unit locations against three harmful storage rests, both orders");
        E("z-locations", 28, "(14-2)*2+4", true,
          "locations whose no-event back-action phase is never recovered and enters at "
          "second order");
    } else if (unit == "cz_exrec") {
        E("ec2:ec1", 74, "(3*7)+(2*8)+(2*8)+(3*7)", true,
          "leading-unit cross terms: undetected-exit counts per line times partners");
        E("cz:ec1", 30, "10*3", true, "");
        E("cz:ec2", 30, "10*3", true, "");
        E("cz:cz", 6, "C(4,2)", true, "pairs among the four couplers");
        E("eca:ec1", 274, "(3*10)+(2*11)+(2*11)+(3*10)+10*(28-11)", true,
          "same-block leading unit against trailing part 1 plus part 2");
        E("eca:ec2", 240, "10*6+10*18", true,
          "cross-block: ten harmful exits against six early and the eighteen "
          "recovery-section locations of the partner");
        E("eca:cz", 110, "(10+11+11+10)+17*4", true, "");
        E("eca:eca", 134, "(C(14,2)-(12+24+1))+4*(28-8)", true,
          "pairs inside a single trailing unit");
        E("ecb:ec1", 240, "10*6+10*18", true, "");
        E("ecb:ec2", 274, "(3*10)+(2*11)+(2*11)+(3*10)+10*(28-11)", true, "");
        E("ecb:cz", 110, "(10+11+11+10)+17*4", true, "");
        E("ecb:eca", 224, "4*(10+18)*2", true, "");
        E("ecb:ecb", 134, "(C(14,2)-(12+24+1))+4*(28-8)", true, "");
        E("z-locations", 52, "(14-2)*4+4", false,
          "uncorrected no-event phases; itemized at the source but not part of its "
          "declared pair total");
    } else {
        throw std::invalid_argument("ledger: unknown unit '" + unit +
                                    "' (expected memory or cz_exrec)");
    }
    for (const auto& e : r.entries) {
        if (eval_count_expression(e.derivation) != e.count)
            throw std::logic_error("ledger: entry '" + e.block_pair +
                                   "' disagrees with its derivation");
        if (e.block_pair == "z-locations") r.z_locations = e.count;
        if (e.in_total) {
            r.A += e.count;
            if (e.block_pair != "z-locations") r.damping_pairs += e.count;
        }
    }
    r.p_th = 1.0 / static_cast<double>(r.A);
    return r;
}

}  // namespace aqec
