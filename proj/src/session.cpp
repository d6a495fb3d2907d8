#include "pfaffkit/session.hpp"

#include <cctype>
#include <set>

namespace pfk {
namespace {

enum class Tok {
    ident,
    num,
    semi,
    comma,
    eq,
    plus,
    minus,
    star,
    caret,
    slash,
    lparen,
    rparen,
    lbracket,
    rbracket,
    lbrace,
    rbrace,
    dotdot,
    end
};

struct Token {
    Tok kind;
    std::string text;
    std::size_t line, col;
};

std::vector<Token> lex(const std::string& text) {
    std::vector<Token> out;
    std::size_t line = 1, col = 1, i = 0;
    auto push = [&](Tok k, std::string t, std::size_t c) { out.push_back({k, std::move(t), line, c}); };
    while (i < text.size()) {
        char c = text[i];
        if (c == '\n') {
            ++line;
            col = 1;
            ++i;
            continue;
        }
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++col;
            ++i;
            continue;
        }
        if (c == '#') {
            while (i < text.size() && text[i] != '\n') ++i;
            continue;
        }
        std::size_t c0 = col;
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i;
            while (j < text.size() && (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_'))
                ++j;
            push(Tok::ident, text.substr(i, j - i), c0);
            col += j - i;
            i = j;
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
            push(Tok::num, text.substr(i, j - i), c0);
            col += j - i;
            i = j;
            continue;
        }
        if (c == '.' && i + 1 < text.size() && text[i + 1] == '.') {
            push(Tok::dotdot, "..", c0);
            col += 2;
            i += 2;
            continue;
        }
        Tok k;
        switch (c) {
            case ';': k = Tok::semi; break;
            case ',': k = Tok::comma; break;
            case '=': k = Tok::eq; break;
            case '+': k = Tok::plus; break;
            case '-': k = Tok::minus; break;
            case '*': k = Tok::star; break;
            case '^': k = Tok::caret; break;
            case '/': k = Tok::slash; break;
            case '(': k = Tok::lparen; break;
            case ')': k = Tok::rparen; break;
            case '[': k = Tok::lbracket; break;
            case ']': k = Tok::rbracket; break;
            case '{': k = Tok::lbrace; break;
            case '}': k = Tok::rbrace; break;
            default:
                throw parse_error(line, col, std::string("unexpected character '") + c + "'");
        }
        push(k, std::string(1, c), c0);
        ++col;
        ++i;
    }
    out.push_back({Tok::end, "", line, col});
    return out;
}

struct ExprNode {
    enum class Kind { literal, name, add, sub, mul, pow, neg };
    Kind kind = Kind::literal;
    Rat lit;
    std::string name;
    std::uint32_t exp = 0;
    std::vector<ExprNode> kids;
    std::size_t line = 0, col = 0;
};

struct FormTerm {
    bool negated = false;
    std::optional<ExprNode> coeff;
    std::vector<std::size_t> diffs;
    std::size_t line = 0, col = 0;
};

struct ObjectStmt {
    DeclKind kind = DeclKind::poly;
    std::string name;
    std::vector<ExprNode> exprs;      // poly: the value; field: components; system list: members
    std::vector<FormTerm> fterms;     // form terms
    std::vector<std::string> names;   // foliation generators
    std::uint32_t deg = 0;            // monomials(deg=...)
    bool monomials = false;
    std::size_t line = 0, col = 0;
};

struct SessionAst {
    Mode mode = Mode::affine;
    std::uint64_t prime = 0;
    std::size_t domain_line = 0, domain_col = 0;
    std::vector<std::string> vars;
    std::vector<ObjectStmt> objects;
};

const std::set<std::string> kReserved = {"mode",   "domain", "vars",       "poly",
                                         "field",  "form",   "system",     "foliation",
                                         "monomials", "deg", "affine",     "projective",
                                         "rational", "mod"};

class Parser {
public:
    explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

    SessionAst parse() {
        while (peek().kind != Tok::end) statement();
        return std::move(ast_);
    }

private:
    const Token& peek(std::size_t ahead = 0) const {
        std::size_t i = pos_ + ahead;
        return toks_[i < toks_.size() ? i : toks_.size() - 1];
    }
    const Token& advance() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

    [[noreturn]] void fail(const Token& t, const std::string& msg) const {
        throw parse_error(t.line, t.col, msg);
    }

    const Token& expect(Tok k, const std::string& what) {
        if (peek().kind != k) fail(peek(), "expected " + what);
        return advance();
    }

    std::uint64_t parse_uint(const Token& t, std::uint64_t limit, const std::string& what) const {
        mpz_class z(t.text);
        if (z > limit) fail(t, what + " out of range");
        return z.get_ui();
    }

    // a declarable name: an identifier that is not reserved, not taken, and
    // not shaped like a differential of a declared variable
    std::string declare(const Token& t, DeclKind kind) {
        if (t.kind != Tok::ident) fail(t, "expected a name");
        check_declarable(t);
        declared_.emplace(t.text, kind);
        return t.text;
    }

    void check_declarable(const Token& t) const {
        if (kReserved.count(t.text)) fail(t, "'" + t.text + "' is a reserved word");
        if (declared_.count(t.text) || var_index_.count(t.text))
            fail(t, "name '" + t.text + "' already declared");
        if (is_differential(t.text))
            fail(t, "name '" + t.text + "' collides with a differential token");
    }

    bool is_differential(const std::string& s) const {
        return s.size() > 1 && s[0] == 'd' && var_index_.count(s.substr(1)) != 0;
    }

    void require_preamble_position(const Token& head) const {
        if (!ast_.objects.empty())
            fail(head, "'" + head.text + "' must precede every declaration");
    }

    void statement() {
        const Token& head = peek();
        if (head.kind != Tok::ident) fail(head, "expected a statement");
        if (head.text == "mode") return mode_stmt();
        if (head.text == "domain") return domain_stmt();
        if (head.text == "vars") return vars_stmt();
        if (head.text == "poly") return poly_stmt();
        if (head.text == "field") return field_stmt();
        if (head.text == "form") return form_stmt();
        if (head.text == "system") return system_stmt();
        if (head.text == "foliation") return foliation_stmt();
        fail(head, "unknown statement '" + head.text + "'");
    }

    void mode_stmt() {
        const Token& head = advance();
        require_preamble_position(head);
        if (mode_set_) fail(head, "mode already set");
        const Token& m = expect(Tok::ident, "'affine' or 'projective'");
        if (m.text == "affine")
            ast_.mode = Mode::affine;
        else if (m.text == "projective")
            ast_.mode = Mode::projective;
        else
            fail(m, "expected 'affine' or 'projective'");
        expect(Tok::semi, "';'");
        mode_set_ = true;
    }

    void domain_stmt() {
        const Token& head = advance();
        require_preamble_position(head);
        if (domain_set_) fail(head, "domain already set");
        const Token& d = expect(Tok::ident, "'rational' or 'mod <p>'");
        if (d.text == "rational") {
            ast_.prime = 0;
        } else if (d.text == "mod") {
            const Token& p = expect(Tok::num, "a prime modulus");
            ast_.prime = parse_uint(p, UINT64_MAX, "modulus");
            ast_.domain_line = p.line;
            ast_.domain_col = p.col;
        } else {
            fail(d, "expected 'rational' or 'mod <p>'");
        }
        expect(Tok::semi, "';'");
        domain_set_ = true;
    }

    void vars_stmt() {
        const Token& head = advance();
        require_preamble_position(head);
        if (!ast_.vars.empty()) fail(head, "vars already declared");
        do {
            const Token& a = expect(Tok::ident, "a variable name");
            if (kReserved.count(a.text)) fail(a, "'" + a.text + "' is a reserved word");
            if (peek().kind == Tok::dotdot) {
                advance();
                const Token& b = expect(Tok::ident, "a range end like x3");
                for (const std::string& v : expand_range(a, b)) add_var(a, v);
            } else {
                add_var(a, a.text);
            }
        } while (peek().kind == Tok::comma && (advance(), true));
        expect(Tok::semi, "';'");
        // catch names that shadow each other's differentials, e.g. vars y, dy;
        for (const auto& v : ast_.vars)
            if (is_differential(v))
                fail(head, "variable '" + v + "' collides with a differential token");
    }

    std::vector<std::string> expand_range(const Token& a, const Token& b) const {
        auto split = [&](const Token& t) -> std::pair<std::string, std::uint64_t> {
            std::size_t cut = t.text.size();
            while (cut > 0 && std::isdigit(static_cast<unsigned char>(t.text[cut - 1]))) --cut;
            if (cut == t.text.size()) fail(t, "range endpoints need a numeric suffix");
            return {t.text.substr(0, cut), mpz_class(t.text.substr(cut)).get_ui()};
        };
        auto [pa, na] = split(a);
        auto [pb, nb] = split(b);
        if (pa != pb) fail(b, "range endpoints '" + a.text + "' and '" + b.text + "' disagree");
        if (nb < na) fail(b, "empty variable range");
        if (nb - na >= 64) fail(b, "variable range too long");
        std::vector<std::string> out;
        for (std::uint64_t k = na; k <= nb; ++k) out.push_back(pa + std::to_string(k));
        return out;
    }

    void add_var(const Token& at, const std::string& v) {
        if (kReserved.count(v)) fail(at, "'" + v + "' is a reserved word");
        if (var_index_.count(v)) fail(at, "variable '" + v + "' already declared");
        var_index_.emplace(v, ast_.vars.size());
        ast_.vars.push_back(v);
    }

    void require_vars(const Token& head) const {
        if (ast_.vars.empty()) fail(head, "declare vars before '" + head.text + "'");
    }

    void poly_stmt() {
        const Token& head = advance();
        require_vars(head);
        ObjectStmt ob;
        ob.kind = DeclKind::poly;
        ob.line = head.line;
        ob.col = head.col;
        ob.name = declare(peek(), DeclKind::poly);
        advance();
        expect(Tok::eq, "'='");
        ob.exprs.push_back(parse_expr());
        expect(Tok::semi, "';'");
        ast_.objects.push_back(std::move(ob));
    }

    void field_stmt() {
        const Token& head = advance();
        require_vars(head);
        ObjectStmt ob;
        ob.kind = DeclKind::field;
        ob.line = head.line;
        ob.col = head.col;
        ob.name = declare(peek(), DeclKind::field);
        advance();
        expect(Tok::eq, "'='");
        expect(Tok::lbracket, "'['");
        do ob.exprs.push_back(parse_expr());
        while (peek().kind == Tok::comma && (advance(), true));
        expect(Tok::rbracket, "']'");
        expect(Tok::semi, "';'");
        ast_.objects.push_back(std::move(ob));
    }

    void form_stmt() {
        const Token& head = advance();
        require_vars(head);
        ObjectStmt ob;
        ob.kind = DeclKind::form;
        ob.line = head.line;
        ob.col = head.col;
        ob.name = declare(peek(), DeclKind::form);
        advance();
        expect(Tok::eq, "'='");
        bool neg = peek().kind == Tok::minus && (advance(), true);
        ob.fterms.push_back(parse_form_term(neg));
        while (peek().kind == Tok::plus || peek().kind == Tok::minus)
            ob.fterms.push_back(parse_form_term(advance().kind == Tok::minus));
        expect(Tok::semi, "';'");
        ast_.objects.push_back(std::move(ob));
    }

    FormTerm parse_form_term(bool negated) {
        FormTerm t;
        t.negated = negated;
        t.line = peek().line;
        t.col = peek().col;
        if (!at_differential()) t.coeff = parse_term();
        if (!at_differential())
            fail(peek(), "expected a differential like d" + ast_.vars[0] + " here");
        while (true) {
            const Token& d = advance();
            std::size_t ix = var_index_.at(d.text.substr(1));
            for (std::size_t seen : t.diffs)
                if (seen == ix) fail(d, "repeated differential '" + d.text + "'");
            t.diffs.push_back(ix);
            if (peek().kind != Tok::caret) break;
            advance();
            if (!at_differential()) fail(peek(), "expected a differential after '^'");
        }
        return t;
    }

    bool at_differential() const {
        return peek().kind == Tok::ident && is_differential(peek().text);
    }

    void system_stmt() {
        const Token& head = advance();
        require_vars(head);
        ObjectStmt ob;
        ob.kind = DeclKind::system;
        ob.line = head.line;
        ob.col = head.col;
        ob.name = declare(peek(), DeclKind::system);
        advance();
        expect(Tok::eq, "'='");
        if (peek().kind == Tok::ident && peek().text == "monomials") {
            advance();
            expect(Tok::lparen, "'('");
            const Token& kw = expect(Tok::ident, "'deg'");
            if (kw.text != "deg") fail(kw, "expected 'deg'");
            expect(Tok::eq, "'='");
            ob.deg = static_cast<std::uint32_t>(
                parse_uint(expect(Tok::num, "a degree"), 1u << 20, "degree"));
            expect(Tok::rparen, "')'");
            ob.monomials = true;
        } else {
            expect(Tok::lbrace, "'{' or monomials(deg=...)");
            do ob.exprs.push_back(parse_expr());
            while (peek().kind == Tok::comma && (advance(), true));
            expect(Tok::rbrace, "'}'");
        }
        expect(Tok::semi, "';'");
        ast_.objects.push_back(std::move(ob));
    }

    void foliation_stmt() {
        const Token& head = advance();
        require_vars(head);
        ObjectStmt ob;
        ob.kind = DeclKind::foliation;
        ob.line = head.line;
        ob.col = head.col;
        ob.name = declare(peek(), DeclKind::foliation);
        advance();
        expect(Tok::eq, "'='");
        expect(Tok::lbrace, "'{'");
        do ob.names.push_back(expect(Tok::ident, "a field name").text);
        while (peek().kind == Tok::comma && (advance(), true));
        expect(Tok::rbrace, "'}'");
        if (peek().kind == Tok::ident &&
            (peek().text == "affine" || peek().text == "projective")) {
            Mode m = advance().text == "affine" ? Mode::affine : Mode::projective;
            if (m != ast_.mode)
                fail(toks_[pos_ - 1], "foliation mode conflicts with the session mode");
        }
        expect(Tok::semi, "';'");
        ast_.objects.push_back(std::move(ob));
    }

    ExprNode parse_expr() {
        ExprNode lhs;
        if (peek().kind == Tok::minus) {
            const Token& m = advance();
            lhs.kind = ExprNode::Kind::neg;
            lhs.line = m.line;
            lhs.col = m.col;
            lhs.kids.push_back(parse_term());
        } else {
            lhs = parse_term();
        }
        while (peek().kind == Tok::plus || peek().kind == Tok::minus) {
            const Token& op = advance();
            ExprNode node;
            node.kind = op.kind == Tok::plus ? ExprNode::Kind::add : ExprNode::Kind::sub;
            node.line = op.line;
            node.col = op.col;
            node.kids.push_back(std::move(lhs));
            node.kids.push_back(parse_term());
            lhs = std::move(node);
        }
        return lhs;
    }

    ExprNode parse_term() {
        ExprNode lhs = parse_factor();
        while (peek().kind == Tok::star) {
            const Token& op = advance();
            ExprNode node;
            node.kind = ExprNode::Kind::mul;
            node.line = op.line;
            node.col = op.col;
            node.kids.push_back(std::move(lhs));
            node.kids.push_back(parse_factor());
            lhs = std::move(node);
        }
        return lhs;
    }

    ExprNode parse_factor() {
        ExprNode base = parse_base();
        if (peek().kind == Tok::caret) {
            const Token& op = advance();
            ExprNode node;
            node.kind = ExprNode::Kind::pow;
            node.line = op.line;
            node.col = op.col;
            node.exp = static_cast<std::uint32_t>(
                parse_uint(expect(Tok::num, "an exponent"), 1u << 20, "exponent"));
            node.kids.push_back(std::move(base));
            base = std::move(node);
        }
        return base;
    }

    ExprNode parse_base() {
        const Token& t = peek();
        ExprNode node;
        node.line = t.line;
        node.col = t.col;
        if (t.kind == Tok::num) {
            advance();
            mpz_class num(t.text);
            if (peek().kind == Tok::slash) {
                advance();
                const Token& d = expect(Tok::num, "a denominator");
                mpz_class den(d.text);
                if (den == 0) fail(d, "division by zero in a literal");
                node.lit = Rat(num, den);
            } else {
                node.lit = Rat(num);
            }
            return node;
        }
        if (t.kind == Tok::ident) {
            if (is_differential(t.text))
                fail(t, "'" + t.text + "' is a differential token, not a scalar");
            if (kReserved.count(t.text)) fail(t, "'" + t.text + "' is a reserved word");
            advance();
            node.kind = ExprNode::Kind::name;
            node.name = t.text;
            return node;
        }
        if (t.kind == Tok::lparen) {
            advance();
            node = parse_expr();
            expect(Tok::rparen, "')'");
            return node;
        }
        fail(t, "expected a number, a name, or '('");
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    SessionAst ast_;
    bool mode_set_ = false, domain_set_ = false;
    std::map<std::string, std::size_t> var_index_;
    std::map<std::string, DeclKind> declared_;
};

template <class K>
class Lowerer {
public:
    explicit Lowerer(const SessionAst& ast) : ast_(ast) {
        s_.mode = ast.mode;
        s_.prime = ast.prime;
        s_.vars = ast.vars;
        for (std::size_t i = 0; i < ast.vars.size(); ++i) varix_.emplace(ast.vars[i], i);
    }

    TypedSession<K> run() {
        for (const auto& ob : ast_.objects) object(ob);
        return std::move(s_);
    }

private:
    [[noreturn]] void fail(std::size_t line, std::size_t col, const std::string& msg) const {
        throw parse_error(line, col, msg);
    }

    K literal(const ExprNode& e) const {
        if constexpr (std::is_same_v<K, Fp>) {
            try {
                return Fp::from_rat(e.lit, s_.prime);
            } catch (const bad_prime_error& err) {
                fail(e.line, e.col, err.what());
            }
        } else {
            return e.lit;
        }
    }

    Polynomial<K> eval(const ExprNode& e) const {
        const std::size_t n = s_.vars.size();
        switch (e.kind) {
            case ExprNode::Kind::literal:
                return Polynomial<K>::constant(n, literal(e));
            case ExprNode::Kind::name: {
                auto v = varix_.find(e.name);
                if (v != varix_.end()) return Polynomial<K>::variable(n, v->second, s_.one());
                auto p = s_.polys.find(e.name);
                if (p != s_.polys.end()) return p->second;
                if (s_.fields.count(e.name) || s_.forms.count(e.name) ||
                    s_.systems.count(e.name) || s_.foliations.count(e.name))
                    fail(e.line, e.col,
                         "'" + e.name + "' is not a polynomial or a variable");
                fail(e.line, e.col, "undeclared name '" + e.name + "'");
            }
            case ExprNode::Kind::add:
                return eval(e.kids[0]) + eval(e.kids[1]);
            case ExprNode::Kind::sub:
                return eval(e.kids[0]) - eval(e.kids[1]);
            case ExprNode::Kind::mul:
                return eval(e.kids[0]) * eval(e.kids[1]);
            case ExprNode::Kind::neg:
                return eval(e.kids[0]).scaled(s_.one().times_int(-1));
            case ExprNode::Kind::pow: {
                Polynomial<K> base = eval(e.kids[0]);
                Polynomial<K> acc = Polynomial<K>::constant(n, s_.one());
                std::uint32_t k = e.exp;
                while (k) {
                    if (k & 1) acc *= base;
                    k >>= 1;
                    if (k) base *= base;
                }
                return acc;
            }
        }
        fail(e.line, e.col, "malformed expression");
    }

    void object(const ObjectStmt& ob) {
        switch (ob.kind) {
            case DeclKind::poly: {
                s_.polys.emplace(ob.name, eval(ob.exprs[0]));
                break;
            }
            case DeclKind::field: {
                if (ob.exprs.size() != s_.vars.size())
                    fail(ob.line, ob.col,
                         "variable count mismatch: field '" + ob.name + "' has " +
                             std::to_string(ob.exprs.size()) + " components but the session has " +
                             std::to_string(s_.vars.size()) + " variables");
                std::vector<Polynomial<K>> comps;
                comps.reserve(ob.exprs.size());
                for (const auto& e : ob.exprs) comps.push_back(eval(e));
                s_.fields.emplace(ob.name, VectorField<K>(std::move(comps)));
                break;
            }
            case DeclKind::form: {
                const std::size_t deg = ob.fterms[0].diffs.size();
                DifferentialForm<K> w(s_.vars.size(), deg);
                for (const auto& t : ob.fterms) {
                    if (t.diffs.size() != deg)
                        fail(t.line, t.col,
                             "every term of form '" + ob.name + "' must use " +
                                 std::to_string(deg) + " differentials");
                    Polynomial<K> c = t.coeff ? eval(*t.coeff)
                                              : Polynomial<K>::constant(s_.vars.size(), s_.one());
                    if (t.negated) c = c.scaled(s_.one().times_int(-1));
                    w.add_term(t.diffs, std::move(c));
                }
                if (w.is_zero())
                    fail(ob.line, ob.col,
                         "form '" + ob.name + "' is identically zero; zero forms cannot be declared");
                if (s_.mode == Mode::projective && !w.homogeneous_coefficient_degree())
                    fail(ob.line, ob.col,
                         "projective mode requires homogeneous coefficients of one common degree in form '" +
                             ob.name + "'");
                s_.forms.emplace(ob.name, std::move(w));
                break;
            }
            case DeclKind::system: {
                if (ob.monomials) {
                    s_.systems.emplace(ob.name, LinearSystem<K>::monomials(
                                                    s_.vars.size(), ob.deg, s_.mode, s_.one()));
                } else {
                    std::vector<Polynomial<K>> basis;
                    basis.reserve(ob.exprs.size());
                    for (const auto& e : ob.exprs) basis.push_back(eval(e));
                    try {
                        s_.systems.emplace(ob.name, LinearSystem<K>(std::move(basis)));
                    } catch (const std::invalid_argument& err) {
                        fail(ob.line, ob.col, std::string("system '") + ob.name + "': " + err.what());
                    }
                }
                break;
            }
            case DeclKind::foliation: {
                std::vector<VectorField<K>> gens;
                gens.reserve(ob.names.size());
                for (const auto& g : ob.names) {
                    auto it = s_.fields.find(g);
                    if (it == s_.fields.end()) {
                        if (s_.polys.count(g) || s_.forms.count(g) || s_.systems.count(g) ||
                            s_.foliations.count(g))
                            fail(ob.line, ob.col, "'" + g + "' is not a field");
                        fail(ob.line, ob.col, "undeclared name '" + g + "'");
                    }
                    gens.push_back(it->second);
                }
                try {
                    s_.foliations.emplace(ob.name, Foliation<K>(std::move(gens), s_.mode));
                } catch (const std::invalid_argument& err) {
                    fail(ob.line, ob.col,
                         std::string("foliation '") + ob.name + "': " + err.what());
                }
                break;
            }
        }
        DeclRecord rec{ob.kind, ob.name, ob.names,
                       ob.monomials ? std::optional<std::uint32_t>(ob.deg) : std::nullopt};
        s_.decls.push_back(std::move(rec));
    }

    const SessionAst& ast_;
    TypedSession<K> s_;
    std::map<std::string, std::size_t> varix_;
};

}  // namespace

Session parse_input(const std::string& text) {
    SessionAst ast = Parser(lex(text)).parse();
    if (ast.prime) {
        try {
            require_odd_prime(ast.prime);
        } catch (const std::invalid_argument& err) {
            throw parse_error(ast.domain_line, ast.domain_col, err.what());
        }
        return Lowerer<Fp>(ast).run();
    }
    return Lowerer<Rat>(ast).run();
}

}  // namespace pfk
