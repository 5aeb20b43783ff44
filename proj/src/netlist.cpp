#include "pcram/netlist.hpp"

#include <fstream>
#include <sstream>
#include <unordered_map>

namespace pcram {

namespace {

NodeKind kind_from_name(const std::string& s, size_t line) {
    if (s == "AND") return NodeKind::And;
    if (s == "OR") return NodeKind::Or;
    if (s == "NOT") return NodeKind::Not;
    if (s == "ID") return NodeKind::Id;
    if (s == "CONST0") return NodeKind::Const0;
    if (s == "CONST1") return NodeKind::Const1;
    throw ParseError(line, "unknown gate kind '" + s + "'");
}

std::string strip(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

uint64_t parse_uint(const std::string& s, size_t line, const char* what) {
    if (s.empty()) throw ParseError(line, std::string("expected ") + what);
    uint64_t v = 0;
    for (char ch : s) {
        if (ch < '0' || ch > '9') throw ParseError(line, std::string("bad ") + what + " '" + s + "'");
        v = v * 10 + (ch - '0');
        if (v > 0xffffffffull) throw ParseError(line, std::string(what) + " out of range");
    }
    return v;
}

std::vector<std::string> split_args(const std::string& s, size_t line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : s) {
        if (ch == ',') {
            out.push_back(strip(cur));
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    cur = strip(cur);
    if (!cur.empty()) out.push_back(cur);
    for (const auto& a : out)
        if (a.empty()) throw ParseError(line, "empty argument");
    return out;
}

} // namespace

void serialize(const Circuit& c, std::ostream& os) {
    if (!c.finalized())
        throw CircuitError("serialize: circuit must be finalized");
    os << "circuit " << (c.name().empty() ? "unnamed" : c.name()) << " inputs=" << c.num_inputs()
       << " outputs=" << c.num_outputs() << "\n";

    // Dense renumbering: inputs become x1..xn in input order, gates g0.. in id order.
    std::vector<uint32_t> ref(c.num_nodes(), 0);
    std::vector<bool> is_in(c.num_nodes(), false);
    for (size_t i = 0; i < c.num_inputs(); ++i) {
        ref[c.inputs()[i]] = static_cast<uint32_t>(i + 1);
        is_in[c.inputs()[i]] = true;
    }
    uint32_t next_gate = 0;
    for (NodeId id = 0; id < c.num_nodes(); ++id)
        if (!is_in[id]) ref[id] = next_gate++;

    auto arg = [&](NodeId id) {
        return (is_in[id] ? "x" : "g") + std::to_string(ref[id]);
    };

    for (NodeId id = 0; id < c.num_nodes(); ++id) {
        const auto& nd = c.node(id);
        if (nd.kind == NodeKind::Input) continue;
        os << "g" << ref[id] << " = " << kind_name(nd.kind) << "(";
        unsigned ar = arity_of(nd.kind);
        for (unsigned i = 0; i < ar; ++i) {
            if (i) os << ",";
            os << arg(nd.fanin[i]);
        }
        os << ")\n";
    }
    os << "outputs:";
    for (size_t i = 0; i < c.num_outputs(); ++i) os << (i ? "," : " ") << arg(c.outputs()[i]);
    os << "\n";
}

std::string serialize(const Circuit& c) {
    std::ostringstream os;
    serialize(c, os);
    return os.str();
}

Circuit deserialize(std::istream& is) {
    std::string line;
    size_t line_no = 0;

    auto next_line = [&](std::string& out) {
        while (std::getline(is, line)) {
            ++line_no;
            size_t hash = line.find('#');
            if (hash != std::string::npos) line = line.substr(0, hash);
            line = strip(line);
            if (!line.empty()) {
                out = line;
                return true;
            }
        }
        return false;
    };

    std::string hdr;
    if (!next_line(hdr)) throw ParseError(line_no, "empty netlist");
    std::istringstream hs(hdr);
    std::string tok, name, in_kv, out_kv;
    hs >> tok >> name >> in_kv >> out_kv;
    if (tok != "circuit" || name.empty() || in_kv.rfind("inputs=", 0) != 0 ||
        out_kv.rfind("outputs=", 0) != 0)
        throw ParseError(line_no, "expected 'circuit <name> inputs=<n> outputs=<m>'");
    size_t n_in = parse_uint(in_kv.substr(7), line_no, "input count");
    size_t n_out = parse_uint(out_kv.substr(8), line_no, "output count");

    Circuit c(name);
    for (size_t i = 0; i < n_in; ++i) c.add_input();

    struct PendingGate {
        size_t line;
        NodeKind kind;
        std::vector<std::string> args;
        NodeId id;
    };
    std::vector<PendingGate> gates;
    std::unordered_map<uint64_t, NodeId> gate_ids; // file id -> node id
    std::vector<std::string> output_args;
    size_t outputs_line = 0;
    bool saw_outputs = false;

    std::string ln;
    while (next_line(ln)) {
        if (ln.rfind("outputs:", 0) == 0) {
            if (saw_outputs) throw ParseError(line_no, "duplicate outputs line");
            output_args = split_args(ln.substr(8), line_no);
            outputs_line = line_no;
            saw_outputs = true;
            continue;
        }
        if (saw_outputs) throw ParseError(line_no, "content after outputs line");
        size_t eq = ln.find('=');
        if (eq == std::string::npos || ln[0] != 'g')
            throw ParseError(line_no, "expected 'g<id> = KIND(args)'");
        uint64_t file_id = parse_uint(strip(ln.substr(1, eq - 1)), line_no, "gate id");
        std::string rhs = strip(ln.substr(eq + 1));
        size_t lp = rhs.find('(');
        size_t rp = rhs.rfind(')');
        if (lp == std::string::npos || rp == std::string::npos || rp < lp)
            throw ParseError(line_no, "expected 'KIND(args)'");
        NodeKind kind = kind_from_name(strip(rhs.substr(0, lp)), line_no);
        auto args = split_args(rhs.substr(lp + 1, rp - lp - 1), line_no);
        if (args.size() != arity_of(kind))
            throw ParseError(line_no, std::string(kind_name(kind)) + " takes " +
                                          std::to_string(arity_of(kind)) + " arguments, got " +
                                          std::to_string(args.size()));
        if (gate_ids.count(file_id)) throw ParseError(line_no, "duplicate gate id g" + std::to_string(file_id));
        NodeId id = c.add_gate_unchecked(kind);
        gate_ids.emplace(file_id, id);
        gates.push_back(PendingGate{line_no, kind, std::move(args), id});
    }
    if (!saw_outputs) throw ParseError(line_no, "missing outputs line");

    auto resolve = [&](const std::string& a, size_t ln_no, bool allow_input) -> NodeId {
        if (a.size() >= 2 && a[0] == 'x') {
            if (!allow_input) throw ParseError(ln_no, "outputs must be gates, got '" + a + "'");
            uint64_t i = parse_uint(a.substr(1), ln_no, "input index");
            if (i == 0 || i > n_in) throw ParseError(ln_no, "input x" + std::to_string(i) + " out of range");
            return c.inputs()[i - 1];
        }
        if (a.size() >= 2 && a[0] == 'g') {
            uint64_t i = parse_uint(a.substr(1), ln_no, "gate id");
            auto it = gate_ids.find(i);
            if (it == gate_ids.end()) throw ParseError(ln_no, "undefined gate g" + std::to_string(i));
            return it->second;
        }
        throw ParseError(ln_no, "bad argument '" + a + "'");
    };

    // Second pass: resolve fanins now that every gate id is known.
    Circuit resolved(name);
    for (size_t i = 0; i < n_in; ++i) resolved.add_input();
    {
        // Rebuild with resolved fanins; ids line up with `c` by construction.
        for (auto& g : gates) {
            NodeId fan[2] = {kNoNode, kNoNode};
            for (size_t i = 0; i < g.args.size(); ++i) fan[i] = resolve(g.args[i], g.line, true);
            resolved.add_gate_unchecked(g.kind, fan[0], fan[1]);
        }
    }
    if (output_args.size() != n_out)
        throw ParseError(outputs_line, "header declares " + std::to_string(n_out) +
                                           " outputs, line has " + std::to_string(output_args.size()));
    std::vector<NodeId> outs;
    for (const auto& a : output_args) outs.push_back(resolve(a, outputs_line, false));
    resolved.set_outputs(std::move(outs));

    ValidationReport rep = validate(resolved);
    if (!rep.arity_errors.empty()) throw ParseError(outputs_line, rep.arity_errors.front());
    if (!rep.is_acyclic) throw ParseError(outputs_line, "netlist contains a cycle");
    resolved.finalize();
    return resolved;
}

Circuit deserialize(const std::string& text) {
    std::istringstream is(text);
    return deserialize(is);
}

Circuit read_netlist_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open netlist file '" + path + "'");
    return deserialize(f);
}

void write_netlist_file(const Circuit& c, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write netlist file '" + path + "'");
    serialize(c, f);
}

} // namespace pcram
