#include "smoothcast/artifact.hpp"

#include <cstring>
#include <fstream>

#include "smoothcast/errors.hpp"

namespace smoothcast {

namespace {

constexpr const char* kVersionTag = "smoothcast-artifact v1";

constexpr std::uint32_t kSectionMeta = 1;
constexpr std::uint32_t kSectionSeries = 2;
constexpr std::uint32_t kSectionInit = 3;
constexpr std::uint32_t kSectionMap = 4;
constexpr std::uint32_t kSectionDraws = 5;

std::uint64_t fnv1a(const std::string& bytes) {
    std::uint64_t hash = 14695981039346656037ULL;
    for (unsigned char byte : bytes) {
        hash ^= byte;
        hash *= 1099511628211ULL;
    }
    return hash;
}

class Writer {
public:
    void u8(std::uint8_t v) { buffer_.push_back(static_cast<char>(v)); }
    void u32(std::uint32_t v) { raw(&v, sizeof(v)); }
    void u64(std::uint64_t v) { raw(&v, sizeof(v)); }
    void i64(std::int64_t v) { raw(&v, sizeof(v)); }
    void f64(double v) { raw(&v, sizeof(v)); }
    void str(const std::string& s) {
        u64(s.size());
        buffer_.append(s);
    }
    void f64_vec(const std::vector<double>& v) {
        u64(v.size());
        for (double x : v) f64(x);
    }
    void append(const std::string& bytes) { buffer_.append(bytes); }
    const std::string& bytes() const { return buffer_; }

private:
    void raw(const void* p, std::size_t n) {
        buffer_.append(reinterpret_cast<const char*>(p), n);
    }
    std::string buffer_;
};

class Reader {
public:
    Reader(const char* data, std::size_t size) : data_(data), size_(size) {}

    std::uint8_t u8() { return static_cast<std::uint8_t>(take(1)[0]); }
    std::uint32_t u32() { return read_as<std::uint32_t>(); }
    std::uint64_t u64() { return read_as<std::uint64_t>(); }
    std::int64_t i64() { return read_as<std::int64_t>(); }
    double f64() { return read_as<double>(); }
    std::string str() {
        const std::uint64_t n = u64();
        const char* p = take(n);
        return std::string(p, n);
    }
    std::vector<double> f64_vec() {
        const std::uint64_t n = u64();
        std::vector<double> out(n);
        for (auto& x : out) x = f64();
        return out;
    }
    bool done() const { return pos_ == size_; }

private:
    template <typename T>
    T read_as() {
        T v;
        std::memcpy(&v, take(sizeof(T)), sizeof(T));
        return v;
    }
    const char* take(std::size_t n) {
        if (pos_ + n > size_) {
            throw Error(Errc::checksum_mismatch, "artifact payload truncated");
        }
        const char* p = data_ + pos_;
        pos_ += n;
        return p;
    }
    const char* data_;
    std::size_t size_;
    std::size_t pos_ = 0;
};

void append_section(Writer& file, std::uint32_t tag, const Writer& payload) {
    file.u32(tag);
    file.u64(payload.bytes().size());
    file.append(payload.bytes());
}

} // namespace

void save_artifact(const FittedModel& model, const std::string& path) {
    Writer file;
    file.append(std::string(kVersionTag) + "\n");

    {
        Writer meta;
        meta.u8(model.config.model == ModelKind::lgt ? 0 : 1);
        meta.u8(model.config.mode == FitMode::additive ? 0 : 1);
        meta.u8(model.config.method == InferenceMethod::map ? 0 : 1);
        meta.u8(static_cast<std::uint8_t>(model.config.trend));
        meta.u64(model.config.seed);
        meta.u32(static_cast<std::uint32_t>(model.config.restarts));
        meta.u32(static_cast<std::uint32_t>(model.config.chains));
        meta.u32(static_cast<std::uint32_t>(model.config.warmup));
        meta.u32(static_cast<std::uint32_t>(model.config.draws));
        meta.f64(model.config.reg_prior_mean);
        meta.f64(model.config.reg_prior_scale);
        meta.f64(model.gamma0);
        meta.u64(model.data_fingerprint);
        append_section(file, kSectionMeta, meta);
    }
    {
        Writer series;
        const TimeSeries& train = model.train;
        series.u64(train.size());
        for (std::int64_t t : train.timestamps()) series.i64(t);
        for (double v : train.values()) series.f64(v);
        series.u32(static_cast<std::uint32_t>(train.period()));
        series.u32(static_cast<std::uint32_t>(train.regressor_count()));
        for (const auto& name : train.regressor_names()) series.str(name);
        if (train.has_regressors()) {
            for (double x : train.regressors().data) series.f64(x);
        }
        append_section(file, kSectionSeries, series);
    }
    {
        Writer init;
        init.f64(model.init.level0);
        init.f64(model.init.trend0);
        init.f64_vec(model.init.seasonal0);
        append_section(file, kSectionInit, init);
    }
    {
        Writer map;
        map.f64_vec(model.map.point);
        map.f64(model.map.log_posterior);
        map.u8(model.map.converged ? 1 : 0);
        map.u32(static_cast<std::uint32_t>(model.map.n_evaluations));
        map.u32(static_cast<std::uint32_t>(model.map.restart_index));
        append_section(file, kSectionMap, map);
    }
    {
        Writer draws;
        draws.u8(model.draws ? 1 : 0);
        if (model.draws) {
            const PosteriorDraws& d = *model.draws;
            draws.u32(static_cast<std::uint32_t>(d.n_chains()));
            draws.u32(static_cast<std::uint32_t>(d.n_iterations()));
            draws.u32(static_cast<std::uint32_t>(d.n_params()));
            draws.u32(static_cast<std::uint32_t>(d.warmup));
            for (const auto& chain : d.draws) {
                for (const auto& iter : chain) {
                    for (double v : iter) draws.f64(v);
                }
            }
            for (double a : d.acceptance_rate) draws.f64(a);
        }
        append_section(file, kSectionDraws, draws);
    }

    const std::uint64_t checksum = fnv1a(file.bytes());
    file.u64(checksum);

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error(Errc::io_failure, "cannot write " + path);
    }
    out.write(file.bytes().data(), static_cast<std::streamsize>(file.bytes().size()));
    if (!out) {
        throw Error(Errc::io_failure, "short write to " + path);
    }
}

FittedModel load_artifact(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(Errc::io_failure, "cannot open " + path);
    }
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

    const std::string tag_line = std::string(kVersionTag) + "\n";
    if (bytes.size() < tag_line.size() || bytes.compare(0, tag_line.size(), tag_line) != 0) {
        throw Error(Errc::version_mismatch, path + " does not carry a known version tag");
    }
    if (bytes.size() < tag_line.size() + sizeof(std::uint64_t)) {
        throw Error(Errc::checksum_mismatch, path + " is truncated");
    }

    const std::string body = bytes.substr(0, bytes.size() - sizeof(std::uint64_t));
    std::uint64_t stored;
    std::memcpy(&stored, bytes.data() + body.size(), sizeof(stored));
    if (fnv1a(body) != stored) {
        throw Error(Errc::checksum_mismatch, path + " failed its checksum");
    }

    Reader reader(body.data() + tag_line.size(), body.size() - tag_line.size());
    FittedModel model;
    std::vector<std::int64_t> timestamps;
    std::vector<double> values;
    std::optional<Matrix> regressors;
    std::vector<std::string> reg_names;
    int period = 1;

    while (!reader.done()) {
        const std::uint32_t tag = reader.u32();
        const std::uint64_t length = reader.u64();
        (void)length;
        switch (tag) {
            case kSectionMeta: {
                model.config.model = reader.u8() == 0 ? ModelKind::lgt : ModelKind::dlt;
                model.config.mode = reader.u8() == 0 ? FitMode::additive : FitMode::multiplicative;
                model.config.method =
                    reader.u8() == 0 ? InferenceMethod::map : InferenceMethod::mcmc;
                model.config.trend = static_cast<GlobalTrendKind>(reader.u8());
                model.config.seed = reader.u64();
                model.config.restarts = static_cast<int>(reader.u32());
                model.config.chains = static_cast<int>(reader.u32());
                model.config.warmup = static_cast<int>(reader.u32());
                model.config.draws = static_cast<int>(reader.u32());
                model.config.reg_prior_mean = reader.f64();
                model.config.reg_prior_scale = reader.f64();
                model.gamma0 = reader.f64();
                model.data_fingerprint = reader.u64();
                break;
            }
            case kSectionSeries: {
                const std::uint64_t n = reader.u64();
                timestamps.resize(n);
                for (auto& t : timestamps) t = reader.i64();
                values.resize(n);
                for (auto& v : values) v = reader.f64();
                period = static_cast<int>(reader.u32());
                const std::uint32_t n_reg = reader.u32();
                reg_names.clear();
                for (std::uint32_t j = 0; j < n_reg; ++j) reg_names.push_back(reader.str());
                if (n_reg > 0) {
                    Matrix x(n, n_reg);
                    for (auto& v : x.data) v = reader.f64();
                    regressors = std::move(x);
                }
                break;
            }
            case kSectionInit: {
                model.init.level0 = reader.f64();
                model.init.trend0 = reader.f64();
                model.init.seasonal0 = reader.f64_vec();
                break;
            }
            case kSectionMap: {
                model.map.point = reader.f64_vec();
                model.map.log_posterior = reader.f64();
                model.map.converged = reader.u8() != 0;
                model.map.n_evaluations = static_cast<int>(reader.u32());
                model.map.restart_index = static_cast<int>(reader.u32());
                break;
            }
            case kSectionDraws: {
                if (reader.u8() != 0) {
                    PosteriorDraws d;
                    const std::uint32_t chains = reader.u32();
                    const std::uint32_t iters = reader.u32();
                    const std::uint32_t dim = reader.u32();
                    d.warmup = static_cast<int>(reader.u32());
                    d.draws.assign(chains, std::vector<std::vector<double>>(
                                               iters, std::vector<double>(dim)));
                    for (auto& chain : d.draws) {
                        for (auto& iter : chain) {
                            for (auto& v : iter) v = reader.f64();
                        }
                    }
                    d.acceptance_rate.resize(chains);
                    for (auto& a : d.acceptance_rate) a = reader.f64();
                    model.draws = std::move(d);
                }
                break;
            }
            default:
                throw Error(Errc::version_mismatch,
                            "unknown artifact section " + std::to_string(tag));
        }
    }

    model.train = validate_series(std::move(timestamps), std::move(values),
                                  std::move(regressors), std::move(reg_names), period);
    return model;
}

} // namespace smoothcast
