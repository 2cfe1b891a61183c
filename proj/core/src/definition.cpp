#include "qismet/definition.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>

namespace qismet {

namespace {

std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

std::vector<std::string> split_top_level(std::string_view s, char sep) {
    std::vector<std::string> out;
    int depth = 0;
    std::string cur;
    for (char c : s) {
        if (c == '(') ++depth;
        if (c == ')') --depth;
        if (c == sep && depth == 0) {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(trim(cur));
    return out;
}

double parse_real(const std::string& s, std::size_t line) {
    if (s == "inf" || s == "+inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    double v = 0.0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw ParseError("malformed number '" + s + "'", line);
    return v;
}

// "x:(-inf,inf) y:(1,2) z:(-inf,inf)!0"
Domain parse_domain(const std::string& text, const std::vector<std::string>& coords,
                    std::size_t line) {
    Domain dom;
    dom.ranges.assign(coords.size(), CoordinateRange{});
    std::vector<bool> seen(coords.size(), false);
    std::istringstream is(text);
    std::string tok;
    while (is >> tok) {
        auto colon = tok.find(':');
        if (colon == std::string::npos)
            throw ParseError("domain entry needs the form coord:(lo,hi)", line);
        std::string cname = tok.substr(0, colon);
        auto it = std::find(coords.begin(), coords.end(), cname);
        if (it == coords.end())
            throw ParseError("domain names unknown coordinate '" + cname + "'", line);
        std::size_t ci = static_cast<std::size_t>(it - coords.begin());
        if (seen[ci]) throw ParseError("duplicate domain entry for '" + cname + "'", line);
        seen[ci] = true;

        std::string rest = tok.substr(colon + 1);
        // split bang-separated exclusions off the interval
        std::vector<std::string> parts;
        {
            std::string cur;
            for (char c : rest) {
                if (c == '!') {
                    parts.push_back(cur);
                    cur.clear();
                } else {
                    cur += c;
                }
            }
            parts.push_back(cur);
        }
        const std::string& iv = parts[0];
        if (iv.size() < 2 || iv.front() != '(' || iv.back() != ')')
            throw ParseError("domain interval needs the form (lo,hi)", line);
        auto bounds = split_top_level(std::string_view(iv).substr(1, iv.size() - 2), ',');
        if (bounds.size() != 2) throw ParseError("domain interval needs two bounds", line);
        CoordinateRange r;
        r.lo = parse_real(bounds[0], line);
        r.hi = parse_real(bounds[1], line);
        for (std::size_t i = 1; i < parts.size(); ++i)
            r.excluded.push_back(parse_real(parts[i], line));
        dom.ranges[ci] = std::move(r);
    }
    for (std::size_t i = 0; i < coords.size(); ++i)
        if (!seen[i])
            throw ParseError("domain missing coordinate '" + coords[i] + "'", line);
    return dom;
}

// "g(1,2)" -> {0, 1}
std::pair<int, int> parse_indices(const std::string& key, std::size_t line) {
    auto open = key.find('(');
    auto close = key.find(')');
    if (open == std::string::npos || close == std::string::npos || close < open)
        throw ParseError("expected indexed key like g(i,j)", line);
    auto parts = split_top_level(std::string_view(key).substr(open + 1, close - open - 1), ',');
    if (parts.size() != 2) throw ParseError("expected two indices", line);
    int i = static_cast<int>(parse_real(parts[0], line));
    int j = static_cast<int>(parse_real(parts[1], line));
    return {i - 1, j - 1};
}

int parse_index1(const std::string& key, std::size_t line) {
    auto open = key.find('(');
    auto close = key.find(')');
    if (open == std::string::npos || close == std::string::npos || close < open)
        throw ParseError("expected indexed key like f(i)", line);
    return static_cast<int>(
               parse_real(trim(std::string_view(key).substr(open + 1, close - open - 1)), line)) -
           1;
}

std::vector<Expr> parse_expr_vector(const std::string& value,
                                    const std::vector<std::string>& coords, std::size_t line) {
    std::string v = trim(value);
    if (v.size() < 2 || v.front() != '(' || v.back() != ')')
        throw ParseError("expected a parenthesized component list", line);
    auto parts = split_top_level(std::string_view(v).substr(1, v.size() - 2), ',');
    if (parts.size() != coords.size())
        throw ParseError("component count does not match the manifold dimension", line);
    std::vector<Expr> out;
    out.reserve(parts.size());
    for (const auto& p : parts) out.push_back(parse_expr(p, coords));
    return out;
}

struct ManifoldBuilder {
    std::size_t line = 0;
    std::string name;
    int dim = 0;
    std::vector<std::string> coords;
    std::optional<Domain> domain;
    std::string domain_text;

    bool has_metric = false;
    bool has_frame = false;
    bool orthonormal = false;
    std::vector<std::tuple<int, int, Expr>> metric_entries;
    std::vector<std::pair<int, std::vector<Expr>>> frame_rows;

    bool has_structure = false;
    std::optional<std::vector<Expr>> xi, eta;
    std::vector<std::tuple<int, int, Expr>> phi_entries;

    ManifoldEntry finish() const {
        if (name.empty()) throw ParseError("[manifold] missing name", line);
        if (coords.empty()) throw ParseError("[manifold] missing coords", line);
        if (dim != static_cast<int>(coords.size()))
            throw ParseError("dim does not match the coords list", line);
        if (!domain) throw ParseError("[manifold] missing domain", line);
        if (has_metric == has_frame)
            throw ParseError("manifold '" + name + "' needs exactly one of [metric]/[frame]",
                             line);

        ChartManifold manifold = [&]() {
            if (has_metric) {
                ExprMatrix g(dim, dim);
                std::vector<std::vector<bool>> set(static_cast<std::size_t>(dim),
                                                   std::vector<bool>(static_cast<std::size_t>(dim), false));
                for (const auto& [i, j, e] : metric_entries) {
                    if (i < 0 || i >= dim || j < 0 || j >= dim)
                        throw ParseError("metric index out of range", line);
                    if (set[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] ||
                        set[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)])
                        throw ParseError("metric entry set twice (symmetric completion is automatic)",
                                         line);
                    set[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = true;
                    set[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = true;
                    g(i, j) = e;
                    g(j, i) = e;
                }
                return ChartManifold::with_metric(name, coords, *domain, std::move(g));
            }
            if (!orthonormal)
                throw ParseError("[frame] requires orthonormal = true", line);
            ExprMatrix E(dim, dim);
            std::vector<bool> rowset(static_cast<std::size_t>(dim), false);
            for (const auto& [j, comps] : frame_rows) {
                if (j < 0 || j >= dim) throw ParseError("frame index out of range", line);
                if (rowset[static_cast<std::size_t>(j)])
                    throw ParseError("frame vector set twice", line);
                rowset[static_cast<std::size_t>(j)] = true;
                for (int i = 0; i < dim; ++i) E(i, j) = comps[static_cast<std::size_t>(i)];
            }
            for (bool s : rowset)
                if (!s) throw ParseError("frame is missing a vector", line);
            return ChartManifold::with_frame(name, coords, *domain, std::move(E));
        }();

        ManifoldEntry entry{std::move(manifold), std::nullopt};
        if (has_structure) {
            if (!xi || !eta) throw ParseError("[structure] needs xi and eta", line);
            ExprMatrix phi(dim, dim);
            for (const auto& [i, j, e] : phi_entries) {
                if (i < 0 || i >= dim || j < 0 || j >= dim)
                    throw ParseError("phi index out of range", line);
                phi(i, j) = e;
            }
            entry.structure.emplace(entry.manifold, std::move(phi), *xi, *eta);
        }
        return entry;
    }
};

} // namespace

const ManifoldEntry* Definition::find(const std::string& name) const {
    for (const auto& m : manifolds)
        if (m.manifold.name() == name) return &m;
    return nullptr;
}

Embedding Definition::make_embedding(std::size_t idx) const {
    if (idx >= embeddings.size()) throw DefinitionError("no such embedding in definition");
    const EmbeddingBlock& blk = embeddings[idx];
    const ManifoldEntry* src = find(blk.source);
    const ManifoldEntry* tgt = find(blk.target);
    if (!src) throw DefinitionError("embedding source '" + blk.source + "' not defined");
    if (!tgt) throw DefinitionError("embedding target '" + blk.target + "' not defined");
    if (src->manifold.dim() != tgt->manifold.dim())
        throw DefinitionError("embedding between manifolds of different dimension");
    Embedding e{*src, *tgt, blk.F, blk.J, blk.A, blk.B, blk.D};
    return e;
}

Definition parse_definition(const std::string& text) {
    Definition def;
    std::optional<ManifoldBuilder> cur;
    std::optional<Definition::EmbeddingBlock> cur_embed;
    enum class Section { None, Manifold, Metric, Frame, Structure, Embedding };
    Section section = Section::None;

    auto finish_embedding = [&]() {
        if (!cur_embed) return;
        if (cur_embed->F.empty()) throw DefinitionError("[embedding] missing F");
        if (cur_embed->A < 1.0) throw DefinitionError("embedding requires A >= 1");
        if (cur_embed->B < 0.0) throw DefinitionError("embedding requires B >= 0");
        if (cur_embed->D && *cur_embed->D < 0.0)
            throw DefinitionError("embedding requires D >= 0");
        if (cur_embed->target.empty()) throw DefinitionError("[embedding] missing target");
        def.embeddings.push_back(std::move(*cur_embed));
        cur_embed.reset();
    };
    auto finish_manifold = [&]() {
        finish_embedding();
        if (cur) {
            def.manifolds.push_back(cur->finish());
            cur.reset();
        }
    };

    std::istringstream is(text);
    std::string raw;
    std::size_t lineno = 0;
    while (std::getline(is, raw)) {
        ++lineno;
        auto hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        std::string l = trim(raw);
        if (l.empty()) continue;

        if (l.front() == '[') {
            if (l.back() != ']') throw ParseError("unterminated section header", lineno);
            std::string s = trim(std::string_view(l).substr(1, l.size() - 2));
            if (s == "manifold") {
                finish_manifold();
                cur.emplace();
                cur->line = lineno;
                section = Section::Manifold;
            } else if (s == "metric" || s == "frame" || s == "structure" || s == "embedding") {
                if (!cur) throw ParseError("[" + s + "] outside a [manifold]", lineno);
                if (s == "metric") {
                    cur->has_metric = true;
                    section = Section::Metric;
                } else if (s == "frame") {
                    cur->has_frame = true;
                    section = Section::Frame;
                } else if (s == "structure") {
                    cur->has_structure = true;
                    section = Section::Structure;
                } else {
                    finish_embedding();
                    if (cur->name.empty() || cur->dim <= 0)
                        throw ParseError("[embedding] before the manifold header is complete",
                                         lineno);
                    cur_embed.emplace();
                    cur_embed->source = cur->name;
                    cur_embed->J = ExprMatrix(cur->dim, cur->dim);
                    section = Section::Embedding;
                }
            } else {
                throw ParseError("unknown section [" + s + "]", lineno);
            }
            continue;
        }

        auto eq = l.find('=');
        if (eq == std::string::npos) throw ParseError("expected key = value", lineno);
        std::string key = trim(std::string_view(l).substr(0, eq));
        std::string value = trim(std::string_view(l).substr(eq + 1));
        if (key.empty() || value.empty()) throw ParseError("expected key = value", lineno);

        switch (section) {
            case Section::None:
                throw ParseError("content outside any section", lineno);
            case Section::Manifold: {
                if (key == "name") {
                    cur->name = value;
                } else if (key == "dim") {
                    cur->dim = static_cast<int>(parse_real(value, lineno));
                } else if (key == "coords") {
                    cur->coords = split_top_level(value, ',');
                } else if (key == "domain") {
                    if (cur->coords.empty())
                        throw ParseError("domain must follow coords", lineno);
                    cur->domain = parse_domain(value, cur->coords, lineno);
                    cur->domain_text = value;
                } else {
                    throw ParseError("unknown [manifold] key '" + key + "'", lineno);
                }
                break;
            }
            case Section::Metric: {
                if (key.rfind("g(", 0) != 0)
                    throw ParseError("unknown [metric] key '" + key + "'", lineno);
                auto [i, j] = parse_indices(key, lineno);
                cur->metric_entries.emplace_back(i, j, parse_expr(value, cur->coords));
                break;
            }
            case Section::Frame: {
                if (key == "orthonormal") {
                    if (value != "true")
                        throw ParseError("frame metrics require orthonormal = true", lineno);
                    cur->orthonormal = true;
                } else if (key.rfind("f(", 0) == 0) {
                    int j = parse_index1(key, lineno);
                    cur->frame_rows.emplace_back(j,
                                                 parse_expr_vector(value, cur->coords, lineno));
                } else {
                    throw ParseError("unknown [frame] key '" + key + "'", lineno);
                }
                break;
            }
            case Section::Structure: {
                if (key == "xi") {
                    cur->xi = parse_expr_vector(value, cur->coords, lineno);
                } else if (key == "eta") {
                    cur->eta = parse_expr_vector(value, cur->coords, lineno);
                } else if (key.rfind("phi(", 0) == 0) {
                    auto [i, j] = parse_indices(key, lineno);
                    cur->phi_entries.emplace_back(i, j, parse_expr(value, cur->coords));
                } else {
                    throw ParseError("unknown [structure] key '" + key + "'", lineno);
                }
                break;
            }
            case Section::Embedding: {
                if (key == "target") {
                    cur_embed->target = value;
                } else if (key == "F") {
                    cur_embed->F = parse_expr_vector(value, cur->coords, lineno);
                } else if (key.rfind("J(", 0) == 0) {
                    auto [i, j] = parse_indices(key, lineno);
                    if (i < 0 || i >= cur->dim || j < 0 || j >= cur->dim)
                        throw ParseError("J index out of range", lineno);
                    cur_embed->J(i, j) = parse_expr(value, cur->coords);
                } else if (key == "A") {
                    cur_embed->A = parse_real(value, lineno);
                } else if (key == "B") {
                    cur_embed->B = parse_real(value, lineno);
                } else if (key == "D") {
                    cur_embed->D = parse_real(value, lineno);
                } else {
                    throw ParseError("unknown [embedding] key '" + key + "'", lineno);
                }
                break;
            }
        }
    }
    finish_manifold();
    if (def.manifolds.empty()) throw DefinitionError("definition file contains no manifolds");
    return def;
}

namespace {

std::string domain_to_text(const ChartManifold& m) {
    std::string out;
    for (int i = 0; i < m.dim(); ++i) {
        const auto& r = m.domain().ranges[static_cast<std::size_t>(i)];
        if (i) out += ' ';
        out += m.coords()[static_cast<std::size_t>(i)];
        out += ":(";
        out += std::isfinite(r.lo) ? format_real(r.lo) : std::string("-inf");
        out += ',';
        out += std::isfinite(r.hi) ? format_real(r.hi) : std::string("inf");
        out += ')';
        for (double ex : r.excluded) {
            out += '!';
            out += format_real(ex);
        }
    }
    return out;
}

void print_manifold(const ManifoldEntry& e, const Definition& def, std::string& out) {
    const ChartManifold& m = e.manifold;
    out += "[manifold]\nname = " + m.name() + "\ndim = " + std::to_string(m.dim()) +
           "\ncoords = ";
    for (int i = 0; i < m.dim(); ++i) {
        if (i) out += ", ";
        out += m.coords()[static_cast<std::size_t>(i)];
    }
    out += "\ndomain = " + domain_to_text(m) + "\n";

    if (m.frame_spec()) {
        out += "\n[frame]\n";
        for (int j = 0; j < m.dim(); ++j) {
            out += "f(" + std::to_string(j + 1) + ") = (";
            for (int i = 0; i < m.dim(); ++i) {
                if (i) out += ", ";
                out += m.frame_exprs()(i, j).str();
            }
            out += ")\n";
        }
        out += "orthonormal = true\n";
    } else {
        out += "\n[metric]\n";
        for (int i = 0; i < m.dim(); ++i)
            for (int j = i; j < m.dim(); ++j)
                if (!m.metric_exprs()(i, j).is_constant(0.0))
                    out += "g(" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                           ") = " + m.metric_exprs()(i, j).str() + "\n";
    }

    if (e.structure) {
        const ContactStructure& s = *e.structure;
        out += "\n[structure]\nxi = (";
        for (int i = 0; i < m.dim(); ++i) {
            if (i) out += ", ";
            out += s.xi_exprs()[static_cast<std::size_t>(i)].str();
        }
        out += ")\neta = (";
        for (int i = 0; i < m.dim(); ++i) {
            if (i) out += ", ";
            out += s.eta_exprs()[static_cast<std::size_t>(i)].str();
        }
        out += ")\n";
        for (int i = 0; i < m.dim(); ++i)
            for (int j = 0; j < m.dim(); ++j)
                if (!s.phi_exprs()(i, j).is_constant(0.0))
                    out += "phi(" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                           ") = " + s.phi_exprs()(i, j).str() + "\n";
    }

    for (const auto& blk : def.embeddings) {
        if (blk.source != m.name()) continue;
        out += "\n[embedding]\ntarget = " + blk.target + "\nF = (";
        for (std::size_t i = 0; i < blk.F.size(); ++i) {
            if (i) out += ", ";
            out += blk.F[i].str();
        }
        out += ")\n";
        for (int i = 0; i < blk.J.rows(); ++i)
            for (int j = 0; j < blk.J.cols(); ++j)
                if (!blk.J(i, j).is_constant(0.0))
                    out += "J(" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                           ") = " + blk.J(i, j).str() + "\n";
        out += "A = " + format_real(blk.A) + "\n";
        out += "B = " + format_real(blk.B) + "\n";
        if (blk.D) out += "D = " + format_real(*blk.D) + "\n";
    }
}

} // namespace

std::string print_definition(const Definition& def) {
    std::string out;
    for (std::size_t i = 0; i < def.manifolds.size(); ++i) {
        if (i) out += "\n";
        print_manifold(def.manifolds[i], def, out);
    }
    return out;
}

} // namespace qismet
