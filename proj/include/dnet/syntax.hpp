#pragma once

#include <cctype>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "model.hpp"

namespace dnet {

struct source_pos {
    std::size_t line = 1;
    std::size_t col = 1;
};

struct parse_error : std::runtime_error {
    source_pos pos;
    std::string expected;
    parse_error(source_pos p, const std::string& expect, const std::string& got)
        : std::runtime_error("parse error at " + std::to_string(p.line) + ":" +
                             std::to_string(p.col) + ": expected " + expect +
                             ", got " + got),
          pos(p), expected(expect) {}
};

// AST node equality ignores source positions so parse(pretty_print(a)) == a.
// The base/bits block form is desugared to base-limit at parse time.

struct block_ast {
    addr base;
    addr limit;
    source_pos pos;

    friend bool operator==(const block_ast& a, const block_ast& b) {
        return a.base == b.base && a.limit == b.limit;
    }
};

struct dest_ast {
    std::string node;
    std::optional<addr> at; // absent: direct map, destination base = src base
    source_pos pos;

    friend bool operator==(const dest_ast& a, const dest_ast& b) {
        return a.node == b.node && a.at == b.at;
    }
};

struct map_ast {
    block_ast src;
    std::vector<dest_ast> dests;

    friend bool operator==(const map_ast& a, const map_ast& b) {
        return a.src == b.src && a.dests == b.dests;
    }
};

struct overlay_ast {
    std::string node;
    source_pos pos;

    friend bool operator==(const overlay_ast& a, const overlay_ast& b) {
        return a.node == b.node;
    }
};

struct node_ast {
    std::vector<block_ast> accepts;
    std::vector<map_ast> maps;
    std::optional<overlay_ast> overlay;

    friend bool operator==(const node_ast& a, const node_ast& b) {
        return a.accepts == b.accepts && a.maps == b.maps && a.overlay == b.overlay;
    }
};

struct ident_ast {
    std::string text;
    source_pos pos;

    friend bool operator==(const ident_ast& a, const ident_ast& b) {
        return a.text == b.text;
    }
};

struct decl_ast {
    std::vector<ident_ast> names;
    node_ast spec;

    friend bool operator==(const decl_ast& a, const decl_ast& b) {
        return a.names == b.names && a.spec == b.spec;
    }
};

struct net_ast {
    std::vector<decl_ast> decls;

    friend bool operator==(const net_ast& a, const net_ast& b) {
        return a.decls == b.decls;
    }
};

namespace detail {

enum class tok_kind {
    ident,
    nat,
    comma,
    dash,
    slash,
    lbrack,
    rbrack,
    kw_is,
    kw_are,
    kw_accept,
    kw_map,
    kw_over,
    kw_to,
    kw_at,
    eof,
};

struct token {
    tok_kind kind = tok_kind::eof;
    std::string text;
    addr value;
    source_pos pos;
};

inline const char* tok_name(tok_kind k) {
    switch (k) {
    case tok_kind::ident: return "identifier";
    case tok_kind::nat: return "number";
    case tok_kind::comma: return "','";
    case tok_kind::dash: return "'-'";
    case tok_kind::slash: return "'/'";
    case tok_kind::lbrack: return "'['";
    case tok_kind::rbrack: return "']'";
    case tok_kind::kw_is: return "'is'";
    case tok_kind::kw_are: return "'are'";
    case tok_kind::kw_accept: return "'accept'";
    case tok_kind::kw_map: return "'map'";
    case tok_kind::kw_over: return "'over'";
    case tok_kind::kw_to: return "'to'";
    case tok_kind::kw_at: return "'at'";
    case tok_kind::eof: return "end of input";
    }
    return "?";
}

class lexer {
  public:
    explicit lexer(std::string_view text) : text_(text) {}

    std::vector<token> run() {
        std::vector<token> out;
        for (;;) {
            skip_trivia();
            token t = next();
            out.push_back(t);
            if (t.kind == tok_kind::eof)
                break;
        }
        return out;
    }

  private:
    std::string_view text_;
    std::size_t i_ = 0;
    source_pos pos_;

    bool eof() const { return i_ >= text_.size(); }
    char peek() const { return text_[i_]; }

    char advance() {
        char c = text_[i_++];
        if (c == '\n') {
            pos_.line++;
            pos_.col = 1;
        } else {
            pos_.col++;
        }
        return c;
    }

    void skip_trivia() {
        for (;;) {
            if (eof())
                return;
            char c = peek();
            if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else if (c == '#') {
                while (!eof() && peek() != '\n')
                    advance();
            } else if (c == '(' && i_ + 1 < text_.size() && text_[i_ + 1] == '*') {
                source_pos open = pos_;
                advance();
                advance();
                int depth = 1;
                while (depth > 0) {
                    if (eof())
                        throw parse_error(open, "'*)'", "end of input");
                    if (peek() == '(' && i_ + 1 < text_.size() && text_[i_ + 1] == '*') {
                        advance();
                        advance();
                        depth++;
                    } else if (peek() == '*' && i_ + 1 < text_.size() && text_[i_ + 1] == ')') {
                        advance();
                        advance();
                        depth--;
                    } else {
                        advance();
                    }
                }
            } else {
                return;
            }
        }
    }

    token next() {
        token t;
        t.pos = pos_;
        if (eof()) {
            t.kind = tok_kind::eof;
            return t;
        }
        char c = peek();
        if (c == ',') { advance(); t.kind = tok_kind::comma; return t; }
        if (c == '-') { advance(); t.kind = tok_kind::dash; return t; }
        if (c == '/') { advance(); t.kind = tok_kind::slash; return t; }
        if (c == '[') { advance(); t.kind = tok_kind::lbrack; return t; }
        if (c == ']') { advance(); t.kind = tok_kind::rbrack; return t; }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::string digits;
            digits += advance();
            bool hex = false;
            if (digits == "0" && !eof() && (peek() == 'x' || peek() == 'X')) {
                advance();
                hex = true;
                digits.clear();
                if (eof() || !std::isxdigit(static_cast<unsigned char>(peek())))
                    throw parse_error(t.pos, "hex digits after 0x", "none");
            }
            auto is_digit = [&](char d) {
                return hex ? std::isxdigit(static_cast<unsigned char>(d)) != 0
                           : std::isdigit(static_cast<unsigned char>(d)) != 0;
            };
            while (!eof() && is_digit(peek()))
                digits += advance();
            t.kind = tok_kind::nat;
            t.value = hex ? addr("0x" + digits) : addr(digits);
            return t;
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::string word;
            word += advance();
            auto ident_char = [](char d) {
                return std::isalnum(static_cast<unsigned char>(d)) || d == '_' ||
                       d == ':' || d == '.';
            };
            while (!eof() && ident_char(peek()))
                word += advance();
            if (word == "is") t.kind = tok_kind::kw_is;
            else if (word == "are") t.kind = tok_kind::kw_are;
            else if (word == "accept") t.kind = tok_kind::kw_accept;
            else if (word == "map") t.kind = tok_kind::kw_map;
            else if (word == "over") t.kind = tok_kind::kw_over;
            else if (word == "to") t.kind = tok_kind::kw_to;
            else if (word == "at") t.kind = tok_kind::kw_at;
            else {
                t.kind = tok_kind::ident;
                t.text = std::move(word);
            }
            return t;
        }
        throw parse_error(t.pos, "a token", std::string("'") + c + "'");
    }
};

class parser {
  public:
    explicit parser(std::vector<token> toks) : toks_(std::move(toks)) {}

    net_ast run() {
        net_ast out;
        while (cur().kind != tok_kind::eof)
            out.decls.push_back(decl());
        return out;
    }

  private:
    std::vector<token> toks_;
    std::size_t i_ = 0;

    const token& cur() const { return toks_[i_]; }
    const token& ahead(std::size_t k) const {
        std::size_t j = i_ + k;
        return j < toks_.size() ? toks_[j] : toks_.back();
    }

    token expect(tok_kind k, const char* what) {
        if (cur().kind != k)
            throw parse_error(cur().pos, what, tok_name(cur().kind));
        return toks_[i_++];
    }

    bool accept_tok(tok_kind k) {
        if (cur().kind != k)
            return false;
        i_++;
        return true;
    }

    decl_ast decl() {
        decl_ast d;
        token first = expect(tok_kind::ident, "identifier");
        d.names.push_back(ident_ast{first.text, first.pos});
        while (accept_tok(tok_kind::comma)) {
            token t = expect(tok_kind::ident, "identifier");
            for (const auto& prev : d.names)
                if (prev.text == t.text)
                    throw parse_error(t.pos, "distinct identifiers in one declaration",
                                      "duplicate '" + t.text + "'");
            d.names.push_back(ident_ast{t.text, t.pos});
        }
        if (!accept_tok(tok_kind::kw_is) && !accept_tok(tok_kind::kw_are))
            throw parse_error(cur().pos, "'is' or 'are'", tok_name(cur().kind));
        d.spec = node_spec();
        return d;
    }

    node_ast node_spec() {
        node_ast n;
        if (accept_tok(tok_kind::kw_accept)) {
            expect(tok_kind::lbrack, "'['");
            if (cur().kind != tok_kind::rbrack) {
                n.accepts.push_back(block_spec());
                while (accept_tok(tok_kind::comma))
                    n.accepts.push_back(block_spec());
            }
            expect(tok_kind::rbrack, "']'");
        }
        if (accept_tok(tok_kind::kw_map)) {
            expect(tok_kind::lbrack, "'['");
            if (cur().kind != tok_kind::rbrack) {
                map_entry_spec(n.maps);
                // entry boundary: after a destination, a number starts a new entry
                while (accept_tok(tok_kind::comma)) {
                    if (cur().kind == tok_kind::nat) {
                        map_entry_spec(n.maps);
                    } else {
                        dest_spec(n.maps.back().dests);
                    }
                }
            }
            expect(tok_kind::rbrack, "']'");
        }
        if (accept_tok(tok_kind::kw_over)) {
            token t = expect(tok_kind::ident, "identifier");
            n.overlay = overlay_ast{t.text, t.pos};
        }
        return n;
    }

    block_ast block_spec() {
        token base = expect(tok_kind::nat, "number");
        block_ast b;
        b.pos = base.pos;
        b.base = base.value;
        if (accept_tok(tok_kind::dash)) {
            token limit = expect(tok_kind::nat, "number");
            b.limit = limit.value;
        } else if (accept_tok(tok_kind::slash)) {
            token bits = expect(tok_kind::nat, "number");
            if (bits.value > 512)
                throw parse_error(bits.pos, "a block size of at most 2^512", "a larger exponent");
            b.limit = b.base + (addr(1) << static_cast<unsigned>(bits.value)) - 1;
        } else {
            throw parse_error(cur().pos, "'-' or '/'", tok_name(cur().kind));
        }
        return b;
    }

    void map_entry_spec(std::vector<map_ast>& out) {
        map_ast m;
        m.src = block_spec();
        expect(tok_kind::kw_to, "'to'");
        dest_spec(m.dests);
        while (cur().kind == tok_kind::comma && ahead(1).kind == tok_kind::ident) {
            i_++; // comma
            dest_spec(m.dests);
        }
        out.push_back(std::move(m));
    }

    void dest_spec(std::vector<dest_ast>& out) {
        token t = expect(tok_kind::ident, "identifier");
        dest_ast d;
        d.node = t.text;
        d.pos = t.pos;
        if (accept_tok(tok_kind::kw_at))
            d.at = expect(tok_kind::nat, "number").value;
        out.push_back(std::move(d));
    }
};

} // namespace detail

inline net_ast parse(std::string_view text) {
    detail::lexer lex(text);
    detail::parser p(lex.run());
    return p.run();
}

inline std::string hex(const addr& a) {
    std::ostringstream os;
    os << "0x" << std::hex << a;
    return os.str();
}

// Canonical text form: one declaration per line, blocks in base-limit hex,
// explicit 'at' clauses preserved.  parse(pretty_print(a)) == a for all ASTs.
inline std::string pretty_print(const net_ast& ast) {
    std::ostringstream os;
    for (const auto& d : ast.decls) {
        for (std::size_t i = 0; i < d.names.size(); ++i)
            os << (i ? ", " : "") << d.names[i].text;
        os << (d.names.size() > 1 ? " are" : " is");
        if (!d.spec.accepts.empty()) {
            os << " accept [";
            for (std::size_t i = 0; i < d.spec.accepts.size(); ++i) {
                const auto& b = d.spec.accepts[i];
                os << (i ? ", " : "") << hex(b.base) << "-" << hex(b.limit);
            }
            os << "]";
        }
        if (!d.spec.maps.empty()) {
            os << " map [";
            for (std::size_t i = 0; i < d.spec.maps.size(); ++i) {
                const auto& m = d.spec.maps[i];
                os << (i ? ", " : "") << hex(m.src.base) << "-" << hex(m.src.limit)
                   << " to ";
                for (std::size_t j = 0; j < m.dests.size(); ++j) {
                    const auto& dest = m.dests[j];
                    os << (j ? ", " : "") << dest.node;
                    if (dest.at)
                        os << " at " << hex(*dest.at);
                }
            }
            os << "]";
        }
        if (d.spec.overlay)
            os << " over " << d.spec.overlay->node;
        os << "\n";
    }
    return os.str();
}

} // namespace dnet
