#include "ifcx/channel.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ifcx {

namespace {

void validate_kernel(const Mat& q, int x1_size, int x2_size, int y_size, const char* name) {
    if (q.rows() != x1_size * x2_size || q.cols() != y_size) {
        std::ostringstream msg;
        msg << name << " has shape " << q.rows() << "x" << q.cols() << ", expected "
            << x1_size * x2_size << "x" << y_size;
        throw std::invalid_argument(msg.str());
    }
    for (int r = 0; r < q.rows(); ++r) {
        double sum = 0.0;
        for (int c = 0; c < q.cols(); ++c) {
            const double v = q(r, c);
            if (v < 0.0) {
                std::ostringstream msg;
                msg << name << " row " << r << " has negative entry " << v;
                throw std::invalid_argument(msg.str());
            }
            sum += v;
        }
        if (std::abs(sum - 1.0) > kProbTol) {
            std::ostringstream msg;
            msg << name << " row " << r << " sums to " << sum << " (deviation "
                << sum - 1.0 << " exceeds tolerance " << kProbTol << ")";
            throw std::invalid_argument(msg.str());
        }
    }
}

}  // namespace

void validate_channel(const ChannelSpec& ch) {
    if (ch.x1_size < 1 || ch.x2_size < 1 || ch.y1_size < 1) {
        throw std::invalid_argument("channel alphabet sizes must all be >= 1");
    }
    validate_kernel(ch.q1, ch.x1_size, ch.x2_size, ch.y1_size, "q1");
    if (ch.q2) {
        if (ch.y2_size < 1) throw std::invalid_argument("y2_size must be >= 1 when q2 is given");
        validate_kernel(*ch.q2, ch.x1_size, ch.x2_size, ch.y2_size, "q2");
    }
}

void validate_composition(const Vec& q, const std::string& name) {
    if (q.size() < 1) throw std::invalid_argument(name + " must be nonempty");
    double sum = 0.0;
    for (int i = 0; i < q.size(); ++i) {
        if (q[i] < 0.0) {
            throw std::invalid_argument(name + " has a negative entry");
        }
        sum += q[i];
    }
    if (std::abs(sum - 1.0) > kProbTol) {
        std::ostringstream msg;
        msg << name << " sums to " << sum << ", not 1 within " << kProbTol;
        throw std::invalid_argument(msg.str());
    }
}

ChannelSpec load_channel(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open channel file: " + path);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error("channel file " + path + " is not valid JSON: " + e.what());
    }

    ChannelSpec ch;
    try {
        ch.x1_size = doc.at("x1_size").get<int>();
        ch.x2_size = doc.at("x2_size").get<int>();
        ch.y1_size = doc.at("y1_size").get<int>();
        ch.y2_size = doc.value("y2_size", 0);

        const auto read_kernel = [](const nlohmann::json& rows) {
            const auto nr = rows.size();
            if (nr == 0) throw std::runtime_error("empty transition table");
            const auto nc = rows.at(0).size();
            Mat q(static_cast<int>(nr), static_cast<int>(nc));
            for (std::size_t r = 0; r < nr; ++r) {
                if (rows.at(r).size() != nc) {
                    throw std::runtime_error("ragged transition table");
                }
                for (std::size_t c = 0; c < nc; ++c) {
                    q(static_cast<int>(r), static_cast<int>(c)) = rows.at(r).at(c).get<double>();
                }
            }
            return q;
        };

        ch.q1 = read_kernel(doc.at("q1"));
        if (doc.contains("q2")) ch.q2 = read_kernel(doc.at("q2"));
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error("channel file " + path + " is malformed: " + e.what());
    }
    validate_channel(ch);
    return ch;
}

void save_channel(const ChannelSpec& ch, const std::string& path) {
    nlohmann::json doc;
    doc["x1_size"] = ch.x1_size;
    doc["x2_size"] = ch.x2_size;
    doc["y1_size"] = ch.y1_size;
    if (ch.q2) doc["y2_size"] = ch.y2_size;
    const auto dump_kernel = [](const Mat& q) {
        nlohmann::json rows = nlohmann::json::array();
        for (int r = 0; r < q.rows(); ++r) {
            nlohmann::json row = nlohmann::json::array();
            for (int c = 0; c < q.cols(); ++c) row.push_back(q(r, c));
            rows.push_back(row);
        }
        return rows;
    };
    doc["q1"] = dump_kernel(ch.q1);
    if (ch.q2) doc["q2"] = dump_kernel(*ch.q2);

    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write channel file: " + path);
    out << doc.dump(2) << "\n";
}

ChannelSpec z_channel(double p) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw std::invalid_argument("z_channel crossover probability must lie in [0,1]");
    }
    ChannelSpec ch;
    ch.x1_size = ch.x2_size = ch.y1_size = ch.y2_size = 2;
    ch.q1.resize(4, 2);
    for (int x1 = 0; x1 < 2; ++x1) {
        for (int x2 = 0; x2 < 2; ++x2) {
            const int noiseless = x1 * x2;  // X1*X2
            ch.q1(ch.row(x1, x2), noiseless) = 1.0 - p;
            ch.q1(ch.row(x1, x2), 1 - noiseless) = p;
        }
    }
    Mat q2(4, 2);
    for (int x1 = 0; x1 < 2; ++x1) {
        for (int x2 = 0; x2 < 2; ++x2) {
            q2(ch.row(x1, x2), x2) = 1.0;
            q2(ch.row(x1, x2), 1 - x2) = 0.0;
        }
    }
    ch.q2 = q2;
    return ch;
}

ChannelSpec swap_users(const ChannelSpec& ch) {
    if (!ch.q2) throw std::invalid_argument("channel has no q2; cannot analyze user 2");
    ChannelSpec sw;
    sw.x1_size = ch.x2_size;
    sw.x2_size = ch.x1_size;
    sw.y1_size = ch.y2_size;
    sw.y2_size = ch.y1_size;
    sw.q1.resize(sw.x1_size * sw.x2_size, sw.y1_size);
    Mat q2(sw.x1_size * sw.x2_size, sw.y2_size);
    for (int a = 0; a < sw.x1_size; ++a) {      // a ranges over the original X2
        for (int b = 0; b < sw.x2_size; ++b) {  // b over the original X1
            sw.q1.row(sw.row(a, b)) = ch.q2->row(ch.row(b, a));
            q2.row(sw.row(a, b)) = ch.q1.row(ch.row(b, a));
        }
    }
    sw.q2 = q2;
    return sw;
}

Vec output_dist(const ChannelSpec& ch, const CompositionPair& comps) {
    if (comps.q1_comp.size() != ch.x1_size || comps.q2_comp.size() != ch.x2_size) {
        throw std::invalid_argument("composition dimensions do not match channel alphabets");
    }
    Vec out = Vec::Zero(ch.y1_size);
    for (int x1 = 0; x1 < ch.x1_size; ++x1) {
        for (int x2 = 0; x2 < ch.x2_size; ++x2) {
            const double w = comps.q1_comp[x1] * comps.q2_comp[x2];
            if (w == 0.0) continue;
            out += w * ch.q1.row(ch.row(x1, x2)).transpose();
        }
    }
    return out;
}

}  // namespace ifcx
