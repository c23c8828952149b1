#include "tfad/serialize.hpp"

#include <cstring>
#include <stdexcept>

#include "tfad/trainer.hpp"

namespace tfad {

BinaryWriter::BinaryWriter(const std::string& path)
    : out_(path, std::ios::binary), path_(path) {
    if (!out_) throw std::runtime_error("cannot open for writing: " + path);
}

void BinaryWriter::raw(const void* p, std::size_t n) {
    out_.write(static_cast<const char*>(p), static_cast<std::streamsize>(n));
    if (!out_) throw std::runtime_error("write failed: " + path_);
}

void BinaryWriter::magic(const char tag[8]) { raw(tag, 8); }
void BinaryWriter::u8(std::uint8_t v) { raw(&v, 1); }
void BinaryWriter::u32(std::uint32_t v) { raw(&v, 4); }
void BinaryWriter::u64(std::uint64_t v) { raw(&v, 8); }
void BinaryWriter::f64(double v) { raw(&v, 8); }

void BinaryWriter::str(const std::string& s) {
    u32(static_cast<std::uint32_t>(s.size()));
    if (!s.empty()) raw(s.data(), s.size());
}

void BinaryWriter::matrix(const Matrix& m) {
    u64(m.rows);
    u64(m.cols);
    if (!m.data.empty()) raw(m.data.data(), m.data.size() * sizeof(double));
}

void BinaryWriter::f64_vec(const std::vector<double>& v) {
    u64(v.size());
    if (!v.empty()) raw(v.data(), v.size() * sizeof(double));
}

BinaryReader::BinaryReader(const std::string& path)
    : in_(path, std::ios::binary), path_(path) {
    if (!in_) throw std::runtime_error("cannot open for reading: " + path);
}

void BinaryReader::raw(void* p, std::size_t n) {
    in_.read(static_cast<char*>(p), static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(in_.gcount()) != n)
        throw std::runtime_error("truncated or corrupt file: " + path_);
}

void BinaryReader::expect_magic(const char tag[8]) {
    char buf[8];
    raw(buf, 8);
    if (std::memcmp(buf, tag, 8) != 0)
        throw std::runtime_error("bad magic in " + path_ + " (expected " +
                                 std::string(tag, 8) + ")");
}

std::uint8_t BinaryReader::u8() {
    std::uint8_t v;
    raw(&v, 1);
    return v;
}

std::uint32_t BinaryReader::u32() {
    std::uint32_t v;
    raw(&v, 4);
    return v;
}

std::uint64_t BinaryReader::u64() {
    std::uint64_t v;
    raw(&v, 8);
    return v;
}

double BinaryReader::f64() {
    double v;
    raw(&v, 8);
    return v;
}

std::string BinaryReader::str() {
    const std::uint32_t n = u32();
    std::string s(n, '\0');
    if (n) raw(s.data(), n);
    return s;
}

Matrix BinaryReader::matrix() {
    Matrix m;
    m.rows = u64();
    m.cols = u64();
    m.data.resize(m.rows * m.cols);
    if (!m.data.empty()) raw(m.data.data(), m.data.size() * sizeof(double));
    return m;
}

std::vector<double> BinaryReader::f64_vec() {
    std::vector<double> v(u64());
    if (!v.empty()) raw(v.data(), v.size() * sizeof(double));
    return v;
}

bool file_has_magic(const std::string& path, const char tag[8]) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return false;
    char buf[8];
    in.read(buf, 8);
    return in.gcount() == 8 && std::memcmp(buf, tag, 8) == 0;
}

// --- model / checkpoint containers ------------------------------------------

namespace {

constexpr char kModelMagic[8] = {'T', 'F', 'A', 'D', 'M', 'D', '1', '\n'};
constexpr char kCheckpointMagic[8] = {'T', 'F', 'A', 'D', 'C', 'K', '1', '\n'};

void write_dense_layer(BinaryWriter& w, const DenseLayer& l) {
    w.u8(static_cast<std::uint8_t>(l.act));
    w.matrix(l.weights);
    w.matrix(l.bias);
}

DenseLayer read_dense_layer(BinaryReader& r) {
    DenseLayer l;
    l.act = static_cast<Activation>(r.u8());
    l.weights = r.matrix();
    l.bias = r.matrix();
    return l;
}

void write_model_body(BinaryWriter& w, const Model& model) {
    w.u8(model.factors.use_h);
    w.u8(model.factors.use_r);
    w.u8(model.factors.use_e);
    w.u8(model.first_layer_e_only);
    w.u8(model.reconstructed_only);

    w.u64(model.ae.encoder.size());
    for (const auto& l : model.ae.encoder) write_dense_layer(w, l);
    w.u64(model.ae.decoder.size());
    for (const auto& l : model.ae.decoder) write_dense_layer(w, l);

    w.u8(model.scorer.inject_e);
    w.u64(model.scorer.layers.size());
    for (const auto& l : model.scorer.layers) {
        w.u8(static_cast<std::uint8_t>(l.act));
        w.matrix(l.weights);
        w.matrix(l.bias);
        w.matrix(l.e_weight);
    }
}

Model read_model_body(BinaryReader& r) {
    Model model;
    model.factors.use_h = r.u8();
    model.factors.use_r = r.u8();
    model.factors.use_e = r.u8();
    model.first_layer_e_only = r.u8();
    model.reconstructed_only = r.u8();

    model.ae.encoder.resize(r.u64());
    for (auto& l : model.ae.encoder) l = read_dense_layer(r);
    model.ae.decoder.resize(r.u64());
    for (auto& l : model.ae.decoder) l = read_dense_layer(r);

    model.scorer.inject_e = r.u8();
    model.scorer.layers.resize(r.u64());
    for (auto& l : model.scorer.layers) {
        l.act = static_cast<Activation>(r.u8());
        l.weights = r.matrix();
        l.bias = r.matrix();
        l.e_weight = r.matrix();
    }
    model.ae.validate();
    model.scorer.validate();
    return model;
}

}  // namespace

void save_model(const std::string& path, const Model& model) {
    BinaryWriter w(path);
    w.magic(kModelMagic);
    write_model_body(w, model);
}

Model load_model(const std::string& path) {
    BinaryReader r(path);
    r.expect_magic(kModelMagic);
    return read_model_body(r);
}

void save_checkpoint(const std::string& path, const Checkpoint& ck) {
    BinaryWriter w(path);
    w.magic(kCheckpointMagic);
    write_model_body(w, ck.model);
    w.u8(static_cast<std::uint8_t>(ck.opt.config.kind));
    w.f64(ck.opt.config.learning_rate);
    w.f64(ck.opt.config.beta1);
    w.f64(ck.opt.config.beta2);
    w.f64(ck.opt.config.epsilon);
    w.u64(ck.opt.step);
    w.u64(ck.opt.first_moment.size());
    for (const auto& m : ck.opt.first_moment) w.matrix(m);
    for (const auto& m : ck.opt.second_moment) w.matrix(m);
    w.u64(ck.epoch);
    w.f64(ck.best_loss);
    w.u32(ck.plateau);
    w.u64(ck.rng_state);
}

Checkpoint load_checkpoint(const std::string& path) {
    BinaryReader r(path);
    r.expect_magic(kCheckpointMagic);
    Checkpoint ck;
    ck.model = read_model_body(r);
    ck.opt.config.kind = static_cast<OptimizerKind>(r.u8());
    ck.opt.config.learning_rate = r.f64();
    ck.opt.config.beta1 = r.f64();
    ck.opt.config.beta2 = r.f64();
    ck.opt.config.epsilon = r.f64();
    ck.opt.step = r.u64();
    const std::uint64_t n = r.u64();
    ck.opt.first_moment.resize(n);
    for (auto& m : ck.opt.first_moment) m = r.matrix();
    ck.opt.second_moment.resize(n);
    for (auto& m : ck.opt.second_moment) m = r.matrix();
    ck.epoch = r.u64();
    ck.best_loss = r.f64();
    ck.plateau = r.u32();
    ck.rng_state = r.u64();
    return ck;
}

}  // namespace tfad
