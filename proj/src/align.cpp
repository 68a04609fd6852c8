#include "weatlab/align.hpp"

#include <cmath>
#include <fstream>

namespace weatlab {

BilingualDictionary load_dictionary(const std::string& path,
                                    const std::string& source_language,
                                    const std::string& target_language) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open dictionary file: " + path);
    BilingualDictionary dict;
    dict.source_language = source_language;
    dict.target_language = target_language;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        std::size_t tab = line.find('\t');
        if (tab == std::string::npos)
            throw Error(path + ":" + std::to_string(line_no) +
                        ": expected `source<TAB>target`");
        std::string src = line.substr(0, tab);
        std::string tgt = line.substr(tab + 1);
        if (src.empty() || tgt.empty())
            throw Error(path + ":" + std::to_string(line_no) + ": empty word in pair");
        dict.pairs.emplace_back(std::move(src), std::move(tgt));
    }
    if (dict.pairs.empty()) throw Error(path + ": empty dictionary");
    return dict;
}

FitNormalization parse_fit_normalization(const std::string& s) {
    if (s == "none") return FitNormalization::None;
    if (s == "unit") return FitNormalization::Unit;
    if (s == "center") return FitNormalization::Center;
    if (s == "center+unit") return FitNormalization::CenterUnit;
    throw Error("unknown normalization '" + s +
                "' (expected none, unit, center, or center+unit)");
}

AlignedMatrices extract_aligned(const BilingualDictionary& dict,
                                const EmbeddingSpace& source,
                                const EmbeddingSpace& target,
                                const LookupPolicy& policy) {
    if (source.dim() != target.dim())
        throw Error("alignment requires equal dimensions (" +
                    std::to_string(source.dim()) + " vs " +
                    std::to_string(target.dim()) + ")");
    const std::size_t d = source.dim();

    std::vector<std::pair<std::size_t, std::size_t>> rows;
    AlignedMatrices out;
    for (const auto& [src_word, tgt_word] : dict.pairs) {
        auto si = lookup(source, src_word, policy);
        auto ti = lookup(target, tgt_word, policy);
        if (!si || !ti) {
            ++out.dropped_pairs;
            continue;
        }
        rows.emplace_back(*si, *ti);
        out.kept_pairs.emplace_back(src_word, tgt_word);
    }
    if (rows.empty())
        throw Error("no dictionary pair found in both embedding spaces (" +
                    dict.source_language + "->" + dict.target_language + ")");

    const std::size_t m = rows.size();
    out.source_rows = Mat(m, d);
    out.target_rows = Mat(m, d);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            out.source_rows(i, j) = source.value(rows[i].first, j);
            out.target_rows(i, j) = target.value(rows[i].second, j);
        }
    }
    out.under_determined = m < d;
    return out;
}

namespace {

void normalize_rows(Mat& m, FitNormalization mode) {
    if (mode == FitNormalization::None) return;
    const std::size_t rows = m.rows(), cols = m.cols();
    if (mode == FitNormalization::Center || mode == FitNormalization::CenterUnit) {
        for (std::size_t j = 0; j < cols; ++j) {
            double mean = 0.0;
            for (std::size_t i = 0; i < rows; ++i) mean += m(i, j);
            mean /= static_cast<double>(rows);
            for (std::size_t i = 0; i < rows; ++i) m(i, j) -= mean;
        }
    }
    if (mode == FitNormalization::Unit || mode == FitNormalization::CenterUnit) {
        for (std::size_t i = 0; i < rows; ++i) {
            double norm = 0.0;
            for (std::size_t j = 0; j < cols; ++j) norm += m(i, j) * m(i, j);
            norm = std::sqrt(norm);
            if (norm == 0.0) continue;
            for (std::size_t j = 0; j < cols; ++j) m(i, j) /= norm;
        }
    }
}

} // namespace

ProjectionMatrix fit_procrustes(const AlignedMatrices& aligned,
                                FitNormalization normalization) {
    Mat src = aligned.source_rows;
    Mat tgt = aligned.target_rows;
    if (src.rows() == 0) throw Error("fit_procrustes: no aligned rows");
    normalize_rows(src, normalization);
    normalize_rows(tgt, normalization);

    Mat cross = src.transposed() * tgt; // d x d
    SvdResult decomposition = svd(cross);
    ProjectionMatrix proj;
    proj.w = decomposition.u * decomposition.v.transposed();

    const std::size_t d = proj.w.rows();
    Mat wtw = proj.w.transposed() * proj.w;
    double err = (wtw - Mat::identity(d)).frobenius_norm();
    if (err > 1e-8)
        throw Error("fit_procrustes: projection is not orthogonal (|W^T W - I|_F = " +
                    std::to_string(err) + ")");
    return proj;
}

EmbeddingSpace project(const EmbeddingSpace& space, const ProjectionMatrix& proj) {
    const std::size_t d = space.dim();
    if (proj.w.rows() != d || proj.w.cols() != d)
        throw Error("project: dimension mismatch");

    // Projected spaces carry 64-bit values so the orthogonal map does not
    // perturb cosine geometry beyond double rounding.
    std::vector<double> matrix(space.size() * d);
    std::vector<double> src(d);
    for (std::size_t i = 0; i < space.size(); ++i) {
        for (std::size_t k = 0; k < d; ++k) src[k] = space.value(i, k);
        for (std::size_t j = 0; j < d; ++j) {
            double acc = 0.0;
            for (std::size_t k = 0; k < d; ++k) acc += src[k] * proj.w(k, j);
            matrix[i * d + j] = acc;
        }
    }
    return EmbeddingSpace(space.language(), d, space.words(), std::move(matrix),
                          space.source() + " [projected]");
}

} // namespace weatlab
