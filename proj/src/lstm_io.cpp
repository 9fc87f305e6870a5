#include <charconv>
#include <cstdio>
#include <sstream>

#include "seqcast/error.hpp"
#include "seqcast/lstm.hpp"

namespace seqcast::lstm {

namespace {

std::string exact(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, "%.17g", value);
    return buffer;
}

void write_matrix(std::ostream& out, std::string_view name, const Matrix& m) {
    out << "matrix " << name << ' ' << m.rows() << ' ' << m.cols() << '\n';
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            if (c > 0) out << ' ';
            out << exact(m(r, c));
        }
        out << '\n';
    }
}

void write_vector(std::ostream& out, std::string_view name, const Vector& v) {
    out << "vector " << name << ' ' << v.size() << '\n';
    for (Eigen::Index k = 0; k < v.size(); ++k) {
        if (k > 0) out << ' ';
        out << exact(v(k));
    }
    out << '\n';
}

class Reader {
public:
    explicit Reader(std::string_view text) : in_(std::string(text)) {}

    std::string word() {
        std::string w;
        if (!(in_ >> w)) fail(ErrorCode::Format, "model file ends early");
        return w;
    }

    void expect(std::string_view keyword) {
        const auto w = word();
        if (w != keyword) fail(ErrorCode::Format, "expected '" + std::string(keyword) + "', found '" + w + "'");
    }

    double real() {
        const auto w = word();
        double value = 0.0;
        const auto [ptr, ec] = std::from_chars(w.data(), w.data() + w.size(), value);
        if (ec != std::errc() || ptr != w.data() + w.size()) fail(ErrorCode::Format, "bad number '" + w + "'");
        return value;
    }

    long long integer() {
        const auto w = word();
        long long value = 0;
        const auto [ptr, ec] = std::from_chars(w.data(), w.data() + w.size(), value);
        if (ec != std::errc() || ptr != w.data() + w.size()) fail(ErrorCode::Format, "bad integer '" + w + "'");
        return value;
    }

    std::uint64_t unsigned_integer() {
        const auto w = word();
        std::uint64_t value = 0;
        const auto [ptr, ec] = std::from_chars(w.data(), w.data() + w.size(), value);
        if (ec != std::errc() || ptr != w.data() + w.size()) fail(ErrorCode::Format, "bad integer '" + w + "'");
        return value;
    }

    double keyed_real(std::string_view key) {
        expect(key);
        return real();
    }

    long long keyed_integer(std::string_view key) {
        expect(key);
        return integer();
    }

    void matrix(std::string_view name, Matrix& m) {
        expect("matrix");
        expect(name);
        if (integer() != m.rows() || integer() != m.cols()) {
            fail(ErrorCode::Format, "matrix " + std::string(name) + " has unexpected dimensions");
        }
        for (Eigen::Index r = 0; r < m.rows(); ++r) {
            for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = real();
        }
    }

    void vector(std::string_view name, Vector& v) {
        expect("vector");
        expect(name);
        if (integer() != v.size()) fail(ErrorCode::Format, "vector " + std::string(name) + " has unexpected size");
        for (Eigen::Index k = 0; k < v.size(); ++k) v(k) = real();
    }

private:
    std::istringstream in_;
};

}  // namespace

void write_model(std::ostream& out, const TrainedModel& model) {
    const auto& p = model.params;
    const auto& c = model.config;
    out << kModelHeader << '\n';
    out << "input_size " << p.input_size() << '\n';
    out << "hidden_size " << p.hidden_size() << '\n';
    out << "output_size " << p.output_size() << '\n';
    out << "gate_order forget,candidate,input,output\n";
    out << "standardize " << (c.standardize ? 1 : 0) << '\n';
    out << "mean " << exact(model.standardization.mean) << '\n';
    out << "scale " << exact(model.standardization.scale) << '\n';
    out << "epochs " << c.epochs << '\n';
    out << "learning_rate " << exact(c.learning_rate) << '\n';
    out << "grad_clip_norm " << exact(c.grad_clip_norm) << '\n';
    out << "adam_beta1 " << exact(c.adam_beta1) << '\n';
    out << "adam_beta2 " << exact(c.adam_beta2) << '\n';
    out << "adam_epsilon " << exact(c.adam_epsilon) << '\n';
    out << "seed " << c.seed << '\n';
    write_matrix(out, "input_weights", p.input_weights);
    write_matrix(out, "recurrent_weights", p.recurrent_weights);
    write_vector(out, "gate_bias", p.gate_bias);
    write_matrix(out, "head_weights", p.head_weights);
    write_vector(out, "head_bias", p.head_bias);
    out << "end\n";
}

std::string model_text(const TrainedModel& model) {
    std::ostringstream out;
    write_model(out, model);
    return out.str();
}

TrainedModel read_model(std::string_view text) {
    const auto newline = text.find('\n');
    const auto first_line = text.substr(0, newline);
    if (first_line != kModelHeader && first_line != std::string(kModelHeader) + "\r") {
        fail(ErrorCode::Format, "not a seqcast LSTM model (missing '" + std::string(kModelHeader) + "' header)");
    }
    Reader in(newline == std::string_view::npos ? std::string_view{} : text.substr(newline + 1));

    const auto input_size = in.keyed_integer("input_size");
    const auto hidden_size = in.keyed_integer("hidden_size");
    const auto output_size = in.keyed_integer("output_size");
    if (input_size < 1 || hidden_size < 1 || output_size < 1) fail(ErrorCode::Format, "dimensions must be positive");
    in.expect("gate_order");
    in.expect("forget,candidate,input,output");

    TrainedModel model;
    auto& c = model.config;
    c.hidden_size = hidden_size;
    c.standardize = in.keyed_integer("standardize") != 0;
    model.standardization.mean = in.keyed_real("mean");
    model.standardization.scale = in.keyed_real("scale");
    c.epochs = static_cast<int>(in.keyed_integer("epochs"));
    c.learning_rate = in.keyed_real("learning_rate");
    c.grad_clip_norm = in.keyed_real("grad_clip_norm");
    c.adam_beta1 = in.keyed_real("adam_beta1");
    c.adam_beta2 = in.keyed_real("adam_beta2");
    c.adam_epsilon = in.keyed_real("adam_epsilon");
    in.expect("seed");
    c.seed = in.unsigned_integer();

    model.params = LstmParams::zeros(input_size, hidden_size, output_size);
    in.matrix("input_weights", model.params.input_weights);
    in.matrix("recurrent_weights", model.params.recurrent_weights);
    in.vector("gate_bias", model.params.gate_bias);
    in.matrix("head_weights", model.params.head_weights);
    in.vector("head_bias", model.params.head_bias);
    in.expect("end");
    if (!(model.standardization.scale > 0.0)) fail(ErrorCode::Format, "standardization scale must be positive");
    return model;
}

}  // namespace seqcast::lstm
