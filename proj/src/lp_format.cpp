#include "clt/lp_format.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

namespace clt {

namespace {

bool is_keyword(const std::string& name) {
    std::string l = name;
    std::transform(l.begin(), l.end(), l.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return l == "minimize" || l == "maximize" || l == "subject" || l == "to" ||
           l == "bounds" || l == "end" || l == "free" || l == "infinity" || l == "inf";
}

bool valid_name(const std::string& name) {
    if (name.empty() || std::isdigit(static_cast<unsigned char>(name[0]))) return false;
    if (is_keyword(name)) return false;
    for (char c : name)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
    return true;
}

std::string fmt_num(double v) {
    if (std::isinf(v)) return v > 0 ? "+infinity" : "-infinity";
    char buf[40];
    if (v == std::llround(v) && std::abs(v) < 1e15)
        std::snprintf(buf, sizeof buf, "%lld", static_cast<long long>(std::llround(v)));
    else
        std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_expr(std::ostringstream& out, const std::vector<LpTerm>& terms,
                const LpProblem& p) {
    bool first = true;
    for (const LpTerm& t : terms) {
        double c = t.coef;
        if (first) {
            if (c < 0) out << "- ";
            first = false;
        } else {
            out << (c < 0 ? " - " : " + ");
        }
        double a = std::abs(c);
        if (a != 1.0) out << fmt_num(a) << " ";
        out << p.variables[t.var].name;
    }
    if (first) {
        if (p.variables.empty()) out << "0";
        else out << "0 " << p.variables[0].name;
    }
}

} // namespace

std::string export_lp_format(const LpProblem& problem) {
    problem.check_well_formed();
    for (const LpVariable& v : problem.variables)
        if (!valid_name(v.name))
            fail(ErrorCode::UnsupportedName, "variable name '" + v.name + "' not exportable");

    std::ostringstream out;
    out << (problem.sense == LpSense::Minimize ? "Minimize" : "Maximize") << "\n obj: ";
    write_expr(out, problem.objective, problem);
    out << "\nSubject To\n";
    for (std::size_t i = 0; i < problem.constraints.size(); ++i) {
        const LpConstraint& c = problem.constraints[i];
        std::string name = c.name.empty() ? "c" + std::to_string(i) : c.name;
        if (!valid_name(name))
            fail(ErrorCode::UnsupportedName, "row name '" + name + "' not exportable");
        out << " " << name << ": ";
        write_expr(out, c.terms, problem);
        switch (c.relation) {
            case Relation::Le: out << " <= "; break;
            case Relation::Ge: out << " >= "; break;
            case Relation::Eq: out << " = "; break;
        }
        out << fmt_num(c.rhs) << "\n";
    }
    out << "Bounds\n";
    for (const LpVariable& v : problem.variables) {
        if (!std::isfinite(v.lower) && !std::isfinite(v.upper))
            out << " " << v.name << " free\n";
        else if (v.lower == v.upper)
            out << " " << v.name << " = " << fmt_num(v.lower) << "\n";
        else
            out << " " << fmt_num(v.lower) << " <= " << v.name << " <= " << fmt_num(v.upper)
                << "\n";
    }
    out << "End\n";
    return out.str();
}

namespace {

struct Tokenizer {
    std::vector<std::string> tokens;
    std::size_t pos = 0;

    explicit Tokenizer(const std::string& text) {
        std::string cur;
        auto flush = [&] {
            if (!cur.empty()) {
                tokens.push_back(cur);
                cur.clear();
            }
        };
        for (std::size_t i = 0; i < text.size(); ++i) {
            char c = text[i];
            if (std::isspace(static_cast<unsigned char>(c))) {
                flush();
            } else if (c == ':' || c == '+' || c == '-') {
                flush();
                tokens.push_back(std::string(1, c));
            } else if (c == '<' || c == '>' || c == '=') {
                flush();
                std::string rel(1, c);
                if (i + 1 < text.size() && text[i + 1] == '=') {
                    rel += '=';
                    ++i;
                }
                tokens.push_back(rel);
            } else {
                cur += c;
            }
        }
        flush();
    }

    bool done() const { return pos >= tokens.size(); }
    const std::string& peek() const { return tokens[pos]; }
    std::string take() { return tokens[pos++]; }
    bool accept(const std::string& t) {
        if (!done() && tokens[pos] == t) {
            ++pos;
            return true;
        }
        return false;
    }
};

bool is_number(const std::string& t) {
    char* end = nullptr;
    std::strtod(t.c_str(), &end);
    return end && *end == '\0' && end != t.c_str();
}

double parse_number_token(const std::string& t) {
    if (t == "infinity" || t == "inf") return kLpInf;
    return std::strtod(t.c_str(), nullptr);
}

} // namespace

LpProblem parse_lp_format(const std::string& text) {
    Tokenizer tz(text);
    LpProblem p;
    std::map<std::string, std::uint32_t> var_ids;
    auto var_id = [&](const std::string& name) {
        auto it = var_ids.find(name);
        if (it != var_ids.end()) return it->second;
        std::uint32_t id = p.add_variable(name, 0.0, kLpInf);
        var_ids.emplace(name, id);
        return id;
    };

    auto lower_eq = [](const std::string& a, const char* b) {
        std::string la = a;
        std::transform(la.begin(), la.end(), la.begin(),
                       [](unsigned char c) { return std::tolower(c); });
        return la == b;
    };

    if (tz.done()) fail(ErrorCode::InvalidInput, "empty LP text");
    std::string head = tz.take();
    if (lower_eq(head, "minimize")) p.sense = LpSense::Minimize;
    else if (lower_eq(head, "maximize")) p.sense = LpSense::Maximize;
    else fail(ErrorCode::InvalidInput, "LP text must start with Minimize/Maximize");

    // expr := {('+'|'-')? [num] [var]}, ending at a relation or section word.
    auto parse_expr = [&](std::vector<LpTerm>& terms) {
        bool first = true;
        for (;;) {
            bool has_sign = false;
            double sign = 1.0;
            if (tz.accept("-")) {
                sign = -1.0;
                has_sign = true;
            } else if (tz.accept("+")) {
                has_sign = true;
            }
            if (!has_sign && !first) break;
            if (tz.done()) {
                if (has_sign) fail(ErrorCode::InvalidInput, "dangling sign in expression");
                break;
            }
            double coef = 1.0;
            bool has_coef = false;
            if (is_number(tz.peek())) {
                coef = parse_number_token(tz.take());
                has_coef = true;
            }
            bool name_next = !tz.done() && !is_number(tz.peek()) && tz.peek() != "<=" &&
                             tz.peek() != ">=" && tz.peek() != "=" && tz.peek() != "+" &&
                             tz.peek() != "-" && tz.peek() != ":";
            if (!name_next) {
                if (!has_coef)
                    fail(ErrorCode::InvalidInput, "expected a variable in expression");
                first = false; // bare constant (only "0" is ever emitted): ignore
                continue;
            }
            std::string var = tz.take();
            std::uint32_t id = var_id(var); // register even for zero terms
            double c = sign * coef;
            if (c != 0.0) terms.push_back({id, c});
            first = false;
        }
    };

    // Variable order is taken from the Bounds section (the exporter writes
    // one line per variable, in index order), so round trips keep indices.
    for (std::size_t i = 0; i < tz.tokens.size(); ++i) {
        if (!lower_eq(tz.tokens[i], "bounds")) continue;
        for (std::size_t k = i + 1; k < tz.tokens.size(); ++k) {
            const std::string& tok = tz.tokens[k];
            if (lower_eq(tok, "end")) break;
            if (tok == "+" || tok == "-" || tok == "<=" || tok == "=" || tok == "free" ||
                is_number(tok))
                continue;
            var_id(tok);
        }
        break;
    }

    // Objective section.
    {
        std::string label = tz.take(); // "obj"
        if (!tz.accept(":"))
            fail(ErrorCode::InvalidInput, "objective must be labeled 'obj:'");
        (void)label;
        while (!tz.done() && !lower_eq(tz.peek(), "subject")) {
            std::vector<LpTerm> terms;
            parse_expr(terms);
            for (const LpTerm& t : terms) p.objective.push_back(t);
            if (!tz.done() && !lower_eq(tz.peek(), "subject"))
                fail(ErrorCode::InvalidInput, "unexpected token '" + tz.peek() + "'");
        }
    }
    if (tz.done() || !lower_eq(tz.take(), "subject") || !lower_eq(tz.take(), "to"))
        fail(ErrorCode::InvalidInput, "missing 'Subject To' section");

    while (!tz.done() && !lower_eq(tz.peek(), "bounds") && !lower_eq(tz.peek(), "end")) {
        std::string row_name = tz.take();
        if (!tz.accept(":"))
            fail(ErrorCode::InvalidInput, "constraint must be labeled 'name:'");
        LpConstraint c;
        c.name = row_name;
        parse_expr(c.terms);
        if (tz.done()) fail(ErrorCode::InvalidInput, "constraint missing relation");
        std::string rel = tz.take();
        if (rel == "<=") c.relation = Relation::Le;
        else if (rel == ">=") c.relation = Relation::Ge;
        else if (rel == "=") c.relation = Relation::Eq;
        else fail(ErrorCode::InvalidInput, "bad relation '" + rel + "'");
        double sign = 1.0;
        if (tz.accept("-")) sign = -1.0;
        else tz.accept("+");
        if (tz.done() || !is_number(tz.peek()))
            fail(ErrorCode::InvalidInput, "constraint missing rhs");
        c.rhs = sign * parse_number_token(tz.take());
        p.constraints.push_back(std::move(c));
    }

    if (!tz.done() && lower_eq(tz.peek(), "bounds")) {
        tz.take();
        while (!tz.done() && !lower_eq(tz.peek(), "end")) {
            // forms: "lo <= name <= hi" | "name free" | "name = v"
            double sign = 1.0;
            if (tz.accept("-")) sign = -1.0;
            else tz.accept("+");
            if (is_number(tz.peek()) || tz.peek() == "infinity") {
                double lo = sign * parse_number_token(tz.take());
                if (!tz.accept("<=")) fail(ErrorCode::InvalidInput, "bad bounds line");
                std::uint32_t id = var_id(tz.take());
                if (!tz.accept("<=")) fail(ErrorCode::InvalidInput, "bad bounds line");
                double s2 = 1.0;
                if (tz.accept("-")) s2 = -1.0;
                else tz.accept("+");
                double hi = s2 * parse_number_token(tz.take());
                p.variables[id].lower = lo;
                p.variables[id].upper = hi;
            } else {
                std::uint32_t id = var_id(tz.take());
                if (tz.accept("free")) {
                    p.variables[id].lower = -kLpInf;
                    p.variables[id].upper = kLpInf;
                } else if (tz.accept("=")) {
                    double s2 = 1.0;
                    if (tz.accept("-")) s2 = -1.0;
                    else tz.accept("+");
                    double v = s2 * parse_number_token(tz.take());
                    p.variables[id].lower = v;
                    p.variables[id].upper = v;
                } else {
                    fail(ErrorCode::InvalidInput, "bad bounds line");
                }
            }
        }
    }
    if (tz.done() || !lower_eq(tz.take(), "end"))
        fail(ErrorCode::InvalidInput, "missing End");
    return p;
}

namespace {

std::vector<LpTerm> sorted_terms(std::vector<LpTerm> t) {
    std::sort(t.begin(), t.end(),
              [](const LpTerm& a, const LpTerm& b) { return a.var < b.var; });
    return t;
}

bool terms_equal(const std::vector<LpTerm>& a, const std::vector<LpTerm>& b) {
    std::vector<LpTerm> sa = sorted_terms(a), sb = sorted_terms(b);
    if (sa.size() != sb.size()) return false;
    for (std::size_t i = 0; i < sa.size(); ++i)
        if (sa[i].var != sb[i].var || sa[i].coef != sb[i].coef) return false;
    return true;
}

} // namespace

bool problems_equivalent(const LpProblem& a, const LpProblem& b) {
    if (a.sense != b.sense) return false;
    if (a.variables.size() != b.variables.size()) return false;
    for (std::size_t i = 0; i < a.variables.size(); ++i) {
        const LpVariable& va = a.variables[i];
        const LpVariable& vb = b.variables[i];
        if (va.name != vb.name || va.lower != vb.lower || va.upper != vb.upper) return false;
    }
    if (a.constraints.size() != b.constraints.size()) return false;
    for (std::size_t i = 0; i < a.constraints.size(); ++i) {
        const LpConstraint& ca = a.constraints[i];
        const LpConstraint& cb = b.constraints[i];
        if (ca.relation != cb.relation || ca.rhs != cb.rhs) return false;
        if (!terms_equal(ca.terms, cb.terms)) return false;
    }
    return terms_equal(a.objective, b.objective);
}

} // namespace clt
