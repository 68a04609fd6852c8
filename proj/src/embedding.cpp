#include "weatlab/embedding.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>

namespace weatlab {

namespace {

bool is_integer_token(std::string_view tok) {
    if (tok.empty()) return false;
    for (char c : tok) {
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    }
    return true;
}

std::vector<std::string_view> split_ws(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
        std::size_t start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
        if (i > start) out.push_back(line.substr(start, i - start));
    }
    return out;
}

} // namespace

std::string ascii_lower(const std::string& s) {
    std::string out = s;
    for (char& c : out) {
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    }
    return out;
}

EmbeddingSpace::EmbeddingSpace(std::string language, std::size_t dim,
                               std::vector<std::string> words,
                               std::vector<float> matrix, std::string source)
    : language_(std::move(language)),
      dim_(dim),
      words_(std::move(words)),
      mat32_(std::move(matrix)),
      source_(std::move(source)) {
    if (dim_ < 1) throw Error("embedding dimension must be >= 1");
    if (mat32_.size() != words_.size() * dim_)
        throw Error("embedding matrix size does not match vocabulary");
    check_finite();
    build_vocab();
}

EmbeddingSpace::EmbeddingSpace(std::string language, std::size_t dim,
                               std::vector<std::string> words,
                               std::vector<double> matrix, std::string source)
    : language_(std::move(language)),
      dim_(dim),
      words_(std::move(words)),
      mat64_(std::move(matrix)),
      source_(std::move(source)) {
    if (dim_ < 1) throw Error("embedding dimension must be >= 1");
    if (mat64_.size() != words_.size() * dim_)
        throw Error("embedding matrix size does not match vocabulary");
    check_finite();
    build_vocab();
}

void EmbeddingSpace::build_vocab() {
    vocab_.reserve(words_.size());
    for (std::size_t i = 0; i < words_.size(); ++i) {
        auto [it, inserted] = vocab_.emplace(words_[i], i);
        if (!inserted) throw Error("duplicate vocabulary entry: " + words_[i]);
    }
}

void EmbeddingSpace::check_finite() const {
    for (float v : mat32_)
        if (!std::isfinite(v)) throw Error("non-finite embedding component");
    for (double v : mat64_)
        if (!std::isfinite(v)) throw Error("non-finite embedding component");
}

std::vector<double> EmbeddingSpace::row_copy(std::size_t i) const {
    std::vector<double> out(dim_);
    for (std::size_t j = 0; j < dim_; ++j) out[j] = value(i, j);
    return out;
}

std::optional<std::size_t> EmbeddingSpace::find(const std::string& word) const {
    auto it = vocab_.find(word);
    if (it == vocab_.end()) return std::nullopt;
    return it->second;
}

std::optional<std::size_t> lookup(const EmbeddingSpace& space,
                                  const std::string& term,
                                  const LookupPolicy& policy) {
    if (auto idx = space.find(term)) return idx;
    if (policy.case_strategy == CaseStrategy::ExactThenLowercase) {
        std::string lower = ascii_lower(term);
        if (lower != term) {
            if (auto idx = space.find(lower)) return idx;
        }
    }
    return std::nullopt;
}

EmbeddingSpace load_embeddings(const std::string& path,
                               const std::string& language,
                               std::optional<std::size_t> limit,
                               DuplicatePolicy on_duplicate) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open embedding file: " + path);

    std::vector<std::string> words;
    std::vector<float> matrix;
    std::unordered_map<std::string, std::size_t> vocab;
    std::size_t dim = 0;
    std::size_t duplicates = 0;
    std::size_t line_no = 0;
    bool first_line = true;
    std::string line;

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;

        auto toks = split_ws(line);
        if (first_line) {
            first_line = false;
            // A 2-token all-integer first line is a header, else data.
            if (toks.size() == 2 && is_integer_token(toks[0]) && is_integer_token(toks[1])) {
                std::size_t n = 0, d = 0;
                std::from_chars(toks[0].data(), toks[0].data() + toks[0].size(), n);
                std::from_chars(toks[1].data(), toks[1].data() + toks[1].size(), d);
                std::size_t n_eff = limit ? std::min(n, *limit) : n;
                words.reserve(n_eff);
                matrix.reserve(n_eff * d);
                vocab.reserve(n_eff);
                continue;
            }
        }

        if (toks.size() < 2)
            throw Error(path + ":" + std::to_string(line_no) +
                        ": malformed line (need word + vector)");

        std::size_t row_dim = toks.size() - 1;
        if (dim == 0) {
            dim = row_dim;
        } else if (row_dim != dim) {
            throw Error(path + ":" + std::to_string(line_no) +
                        ": dimension mismatch (expected " + std::to_string(dim) +
                        ", got " + std::to_string(row_dim) + ")");
        }

        std::string word(toks[0]);
        if (vocab.count(word)) {
            if (on_duplicate == DuplicatePolicy::Fail)
                throw Error(path + ":" + std::to_string(line_no) + ": duplicate word '" +
                            word + "'");
            ++duplicates;
            continue;
        }

        std::size_t base = matrix.size();
        matrix.resize(base + dim);
        for (std::size_t j = 0; j < dim; ++j) {
            auto tok = toks[j + 1];
            float v = 0.0f;
            auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
            if (ec != std::errc{} || ptr != tok.data() + tok.size())
                throw Error(path + ":" + std::to_string(line_no) +
                            ": non-numeric component '" + std::string(tok) + "'");
            if (!std::isfinite(v))
                throw Error(path + ":" + std::to_string(line_no) + ": non-finite component");
            matrix[base + j] = v;
        }
        vocab.emplace(std::move(word), words.size());
        words.push_back(std::string(toks[0]));

        if (limit && words.size() >= *limit) break;
    }

    if (words.empty()) throw Error(path + ": no data lines");

    // Hand the already-built vocabulary to the space instead of
    // rebuilding it (a second map would dominate memory on big loads).
    EmbeddingSpace space;
    space.language_ = language;
    space.dim_ = dim;
    space.words_ = std::move(words);
    space.mat32_ = std::move(matrix);
    space.source_ = path;
    space.vocab_ = std::move(vocab);
    space.duplicates_skipped_ = duplicates;
    return space;
}

void save_embeddings(const EmbeddingSpace& space, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write embedding file: " + path);
    out << space.size() << ' ' << space.dim() << '\n';
    const char* fmt = space.double_precision() ? " %.17g" : " %.9g";
    char buf[64];
    for (std::size_t i = 0; i < space.size(); ++i) {
        out << space.words()[i];
        for (std::size_t j = 0; j < space.dim(); ++j) {
            std::snprintf(buf, sizeof buf, fmt, space.value(i, j));
            out << buf;
        }
        out << '\n';
    }
    if (!out) throw Error("write failed: " + path);
}

} // namespace weatlab
