#include "smczoo/dataio.hpp"

#include "smczoo/distributions.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace smczoo {

const char* modality_name(Modality m) {
    switch (m) {
        case Modality::CT: return "CT";
        case Modality::GM: return "GM";
        case Modality::JD: return "JD";
        case Modality::WM: return "WM";
        case Modality::ALL: return "ALL";
    }
    return "?";
}

std::optional<Modality> modality_from_name(const std::string& name) {
    std::string up;
    for (char c : name) up.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
    if (up == "CT") return Modality::CT;
    if (up == "GM") return Modality::GM;
    if (up == "JD") return Modality::JD;
    if (up == "WM") return Modality::WM;
    if (up == "ALL") return Modality::ALL;
    return std::nullopt;
}

void Dataset::validate() const {
    const Eigen::Index nr = features.rows();
    if (labels.size() != nr || static_cast<Eigen::Index>(subject_ids.size()) != nr)
        throw std::runtime_error("Dataset: row count mismatch between features, labels, ids");
    if (static_cast<Eigen::Index>(feature_names.size()) != features.cols())
        throw std::runtime_error("Dataset: feature name count mismatch");
    for (Eigen::Index i = 0; i < nr; ++i)
        if (labels(i) != 1.0 && labels(i) != -1.0)
            throw std::runtime_error("Dataset: labels must be +1/-1");
    if (!features.allFinite())
        throw std::runtime_error("Dataset: non-finite feature values");
    std::set<std::string> names(feature_names.begin(), feature_names.end());
    if (names.size() != feature_names.size())
        throw std::runtime_error("Dataset: duplicate feature names");
}

Dataset Dataset::subset(const std::vector<int>& rows) const {
    Dataset out;
    out.modality = modality;
    out.feature_names = feature_names;
    out.features.resize(static_cast<Eigen::Index>(rows.size()), features.cols());
    out.labels.resize(static_cast<Eigen::Index>(rows.size()));
    out.subject_ids.reserve(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        out.features.row(static_cast<Eigen::Index>(i)) = features.row(rows[i]);
        out.labels(static_cast<Eigen::Index>(i)) = labels(rows[i]);
        out.subject_ids.push_back(subject_ids[static_cast<std::size_t>(rows[i])]);
    }
    return out;
}

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::string lower(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    std::stringstream ss(line);
    while (std::getline(ss, cur, ',')) out.push_back(trim(cur));
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

double parse_label(const std::string& cell, const std::string& path, std::size_t row) {
    const std::string v = lower(cell);
    if (v == "smc" || v == "+1" || v == "1") return 1.0;
    if (v == "hc" || v == "-1") return -1.0;
    throw std::runtime_error(path + ": row " + std::to_string(row) +
                             ": label must be SMC/HC (or +1/-1), got '" + cell + "'");
}

bool is_demographic(const std::string& name) {
    const std::string l = lower(name);
    return l == "age" || l == "sex";
}

}  // namespace

Dataset load_modality(const std::string& path, Modality modality,
                      std::optional<int> expected_dim, std::ostream* warn) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_modality: cannot open " + path);

    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error(path + ": no rows");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto header = split_csv_line(line);

    int id_col = -1, label_col = -1;
    std::vector<int> feature_cols;
    std::vector<std::string> names;
    for (std::size_t c = 0; c < header.size(); ++c) {
        const std::string l = lower(header[c]);
        if (l == "subject_id" || l == "subjectid" || l == "id")
            id_col = static_cast<int>(c);
        else if (l == "label")
            label_col = static_cast<int>(c);
        else {
            feature_cols.push_back(static_cast<int>(c));
            names.push_back(header[c]);
        }
    }
    if (label_col < 0) throw std::runtime_error(path + ": missing label column");
    if (id_col < 0) throw std::runtime_error(path + ": missing subject_id column");

    std::vector<std::vector<double>> rows;
    std::vector<double> labels;
    std::vector<std::string> ids;
    std::set<std::string> seen_ids;
    std::size_t row_no = 1;
    while (std::getline(in, line)) {
        ++row_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        const auto cells = split_csv_line(line);
        if (cells.size() != header.size())
            throw std::runtime_error(path + ": row " + std::to_string(row_no) +
                                     ": expected " + std::to_string(header.size()) +
                                     " cells, got " + std::to_string(cells.size()));
        const std::string& id = cells[static_cast<std::size_t>(id_col)];
        if (!seen_ids.insert(id).second)
            throw std::runtime_error(path + ": duplicate subject id '" + id + "'");
        ids.push_back(id);
        labels.push_back(parse_label(cells[static_cast<std::size_t>(label_col)], path, row_no));
        std::vector<double> vals;
        vals.reserve(feature_cols.size());
        for (int c : feature_cols) {
            const std::string& cell = cells[static_cast<std::size_t>(c)];
            std::size_t consumed = 0;
            double v = 0.0;
            try {
                v = std::stod(cell, &consumed);
            } catch (const std::exception&) {
                throw std::runtime_error(path + ": row " + std::to_string(row_no) +
                                         ": non-numeric feature cell '" + cell + "'");
            }
            if (consumed != cell.size())
                throw std::runtime_error(path + ": row " + std::to_string(row_no) +
                                         ": non-numeric feature cell '" + cell + "'");
            if (!std::isfinite(v))
                throw std::runtime_error(path + ": row " + std::to_string(row_no) +
                                         ": NaN/Inf feature value");
            vals.push_back(v);
        }
        rows.push_back(std::move(vals));
    }
    if (rows.empty()) throw std::runtime_error(path + ": no rows");

    if (expected_dim && static_cast<int>(names.size()) != *expected_dim && warn)
        *warn << path << ": expected " << *expected_dim << " feature columns, found "
              << names.size() << "\n";

    Dataset ds;
    ds.modality = modality;
    ds.feature_names = std::move(names);
    ds.subject_ids = std::move(ids);
    ds.features.resize(static_cast<Eigen::Index>(rows.size()),
                       static_cast<Eigen::Index>(ds.feature_names.size()));
    ds.labels.resize(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < rows[i].size(); ++j)
            ds.features(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
        ds.labels(static_cast<Eigen::Index>(i)) = labels[i];
    }
    ds.validate();
    return ds;
}

Dataset fuse_all(const std::vector<Dataset>& parts) {
    if (parts.empty()) throw std::runtime_error("fuse_all: no parts");
    std::set<Modality> seen;
    for (const auto& p : parts)
        if (!seen.insert(p.modality).second)
            throw std::runtime_error("fuse_all: modality repeated");
    const auto& ref = parts.front();
    for (const auto& p : parts) {
        if (p.subject_ids != ref.subject_ids)
            throw std::runtime_error("fuse_all: subject ids differ or are reordered");
        if ((p.labels - ref.labels).cwiseAbs().maxCoeff() != 0.0)
            throw std::runtime_error("fuse_all: labels differ between parts");
    }

    std::vector<std::string> names;
    std::vector<std::pair<const Dataset*, Eigen::Index>> cols;  // source part + column
    std::set<std::string> demo_taken;
    for (const auto& p : parts) {
        for (Eigen::Index c = 0; c < p.dim(); ++c) {
            const std::string& nm = p.feature_names[static_cast<std::size_t>(c)];
            if (is_demographic(nm)) {
                if (!demo_taken.insert(lower(nm)).second) continue;
                names.push_back(nm);
            } else {
                names.push_back(std::string(modality_name(p.modality)) + ":" + nm);
            }
            cols.emplace_back(&p, c);
        }
    }

    Dataset out;
    out.modality = Modality::ALL;
    out.feature_names = std::move(names);
    out.subject_ids = ref.subject_ids;
    out.labels = ref.labels;
    out.features.resize(ref.n(), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t j = 0; j < cols.size(); ++j)
        out.features.col(static_cast<Eigen::Index>(j)) = cols[j].first->features.col(cols[j].second);
    out.validate();
    return out;
}

std::pair<Dataset, Dataset> split_train_test(const Dataset& ds, const SplitSpec& spec) {
    if (!(spec.train_fraction > 0.0 && spec.train_fraction < 1.0))
        throw std::invalid_argument("split_train_test: train_fraction must be in (0,1)");

    std::vector<int> pos, neg;
    for (Eigen::Index i = 0; i < ds.n(); ++i)
        (ds.labels(i) > 0 ? pos : neg).push_back(static_cast<int>(i));
    if (pos.size() < 2 || neg.size() < 2)
        throw std::runtime_error("split_train_test: each class needs at least 2 members");

    RngStream rng(spec.seed, 0x59117);
    std::vector<int> train_rows, test_rows;
    auto deal = [&](std::vector<int>& cls) {
        rng.shuffle(cls);
        const auto n_test = static_cast<std::size_t>(
            std::floor((1.0 - spec.train_fraction) * static_cast<double>(cls.size())));
        for (std::size_t i = 0; i < cls.size(); ++i)
            (i < n_test ? test_rows : train_rows).push_back(cls[i]);
    };
    if (spec.stratified) {
        deal(pos);
        deal(neg);
    } else {
        std::vector<int> all = iota_indices(static_cast<int>(ds.n()));
        deal(all);
    }
    std::sort(train_rows.begin(), train_rows.end());
    std::sort(test_rows.begin(), test_rows.end());
    return {ds.subset(train_rows), ds.subset(test_rows)};
}

Matrix apply_scaler(const ScalerParams& sp, const MatrixRef& X) {
    Matrix out = (X.rowwise() - sp.mean.transpose());
    out.array().rowwise() /= sp.stdev.transpose().array();
    for (int c : sp.constant_columns) out.col(c).setZero();
    return out;
}

std::tuple<Dataset, Dataset, ScalerParams> standardize(const Dataset& train,
                                                       const Dataset& test) {
    if (train.feature_names != test.feature_names)
        throw std::runtime_error("standardize: feature columns differ");
    constexpr double kFloor = 1e-12;
    const Eigen::Index d = train.dim();
    const auto n = static_cast<double>(train.n());

    ScalerParams sp;
    sp.mean = train.features.colwise().mean();
    sp.stdev.resize(d);
    for (Eigen::Index c = 0; c < d; ++c) {
        const double var =
            (train.features.col(c).array() - sp.mean(c)).square().sum() / n;  // population
        const double sd = std::sqrt(std::max(var, 0.0));
        if (sd <= kFloor) {
            sp.stdev(c) = kFloor;
            sp.constant_columns.push_back(static_cast<int>(c));
        } else {
            sp.stdev(c) = sd;
        }
    }

    Dataset tr = train;
    Dataset te = test;
    tr.features = apply_scaler(sp, train.features);
    te.features = apply_scaler(sp, test.features);
    return {std::move(tr), std::move(te), std::move(sp)};
}

FoldAssignment kfold_indices(const VectorRef& labels, int k, std::uint64_t seed) {
    if (k < 2) throw std::invalid_argument("kfold_indices: k must be >= 2");
    const Eigen::Index n = labels.size();
    std::vector<int> pos, neg;
    for (Eigen::Index i = 0; i < n; ++i)
        (labels(i) > 0 ? pos : neg).push_back(static_cast<int>(i));
    for (const auto* cls : {&pos, &neg})
        if (!cls->empty() && static_cast<int>(cls->size()) < k)
            throw std::runtime_error("kfold_indices: k exceeds a class count");

    RngStream rng(seed, 0xf01d5);
    FoldAssignment fa;
    fa.k = k;
    fa.fold_of.assign(static_cast<std::size_t>(n), -1);
    int pointer = 0;  // carried across classes so overall fold sizes balance
    for (auto* cls : {&pos, &neg}) {
        rng.shuffle(*cls);
        for (int idx : *cls) {
            fa.fold_of[static_cast<std::size_t>(idx)] = pointer;
            pointer = (pointer + 1) % k;
        }
    }
    return fa;
}

DemographicsResult demographics_tests(const VectorRef& age_a, const VectorRef& age_b,
                                      const std::vector<int>& sex_a,
                                      const std::vector<int>& sex_b) {
    if (age_a.size() == 0 || age_b.size() == 0 || sex_a.empty() || sex_b.empty())
        throw std::invalid_argument("demographics_tests: empty group");

    const auto n1 = static_cast<double>(age_a.size());
    const auto n2 = static_cast<double>(age_b.size());
    const double m1 = age_a.mean(), m2 = age_b.mean();
    const double v1 = (age_a.array() - m1).square().sum() / (n1 - 1.0);
    const double v2 = (age_b.array() - m2).square().sum() / (n2 - 1.0);
    if (v1 <= 0.0 && v2 <= 0.0)
        throw std::runtime_error("demographics_tests: zero variance in both groups");

    DemographicsResult res;
    const double se2 = v1 / n1 + v2 / n2;
    res.t_stat = (m1 - m2) / std::sqrt(se2);
    const double dof = se2 * se2 /
                       ((v1 / n1) * (v1 / n1) / (n1 - 1.0) + (v2 / n2) * (v2 / n2) / (n2 - 1.0));
    res.p_ttest = student_t_two_sided_p(res.t_stat, dof);

    // 2x2 Pearson chi-squared, groups x sex
    double o[2][2] = {{0, 0}, {0, 0}};
    for (int s : sex_a) ++o[0][s != 0 ? 1 : 0];
    for (int s : sex_b) ++o[1][s != 0 ? 1 : 0];
    const double row[2] = {o[0][0] + o[0][1], o[1][0] + o[1][1]};
    const double col[2] = {o[0][0] + o[1][0], o[0][1] + o[1][1]};
    const double total = row[0] + row[1];
    double chi2 = 0.0;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            const double e = row[i] * col[j] / total;
            if (e > 0.0) chi2 += (o[i][j] - e) * (o[i][j] - e) / e;
        }
    res.chi2_stat = chi2;
    res.p_chi2 = chi_squared_sf_1dof(chi2);
    return res;
}

}  // namespace smczoo
