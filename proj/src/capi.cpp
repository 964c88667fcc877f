// SPDX-License-Identifier: Apache-2.0
#include "biokey/biokey.h"

#include <cstring>
#include <new>
#include <string>

#include "biokey/fixtures.hpp"
#include "biokey/image_io.hpp"
#include "biokey/pipeline.hpp"

struct biokey_config {
    biokey::PipelineConfig cfg;
};

struct biokey_report {
    biokey::RunReport report;
};

struct biokey_fixture {
    biokey::fixtures::FixtureSpec spec;
};

namespace {

thread_local std::string g_last_error;

biokey_status fail(biokey_status s, std::string msg) {
    g_last_error = std::move(msg);
    return s;
}

template <typename F>
biokey_status guarded(F&& fn) {
    try {
        fn();
        g_last_error.clear();
        return BIOKEY_OK;
    } catch (const biokey::Error& e) {
        return fail(static_cast<biokey_status>(e.code()), e.what());
    } catch (const std::bad_alloc&) {
        return fail(BIOKEY_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(BIOKEY_ERR_INTERNAL, e.what());
    }
}

void require_arg(bool ok, const char* what) {
    if (!ok) throw biokey::InvalidParameter(std::string("null argument: ") + what);
}

void copy_out(const void* data, size_t size, bool terminate, void* buf, size_t cap, size_t* needed) {
    const size_t total = size + (terminate ? 1 : 0);
    if (needed) *needed = total;
    if (!buf) {
        if (cap != 0) throw biokey::InvalidParameter("null output buffer with nonzero capacity");
        if (!needed) throw biokey::InvalidParameter("null output buffer");
        return;
    }
    if (cap < total) throw biokey::InvalidParameter("output buffer too small: need " + std::to_string(total) + " bytes");
    if (size) std::memcpy(buf, data, size);
    if (terminate) static_cast<char*>(buf)[size] = '\0';
}

void copy_string(const std::string& s, char* buf, size_t cap, size_t* needed) {
    copy_out(s.data(), s.size(), true, buf, cap, needed);
}

}  // namespace

extern "C" {

const char* biokey_version(void) { return "1.0.0"; }

const char* biokey_last_error(void) { return g_last_error.c_str(); }

biokey_status biokey_config_create(biokey_config** out) {
    return guarded([&] {
        require_arg(out, "out");
        *out = new biokey_config{};
    });
}

void biokey_config_destroy(biokey_config* cfg) { delete cfg; }

biokey_status biokey_config_load_file(biokey_config* cfg, const char* path) {
    return guarded([&] {
        require_arg(cfg && path, "cfg/path");
        cfg->cfg = biokey::PipelineConfig::load(path);
    });
}

biokey_status biokey_config_set(biokey_config* cfg, const char* key, const char* value) {
    return guarded([&] {
        require_arg(cfg && key && value, "cfg/key/value");
        cfg->cfg.set(key, value);
    });
}

biokey_status biokey_config_get(const biokey_config* cfg, const char* key, char* buf, size_t cap, size_t* needed) {
    return guarded([&] {
        require_arg(cfg && key, "cfg/key");
        copy_string(cfg->cfg.get(key), buf, cap, needed);
    });
}

biokey_status biokey_config_serialize(const biokey_config* cfg, char* buf, size_t cap, size_t* needed) {
    return guarded([&] {
        require_arg(cfg, "cfg");
        copy_string(cfg->cfg.serialize(), buf, cap, needed);
    });
}

biokey_status biokey_derive(const biokey_config* cfg, const char* fingerprint_path, const char* iris_path,
                            const char* dump_dir, biokey_report** out) {
    return guarded([&] {
        require_arg(cfg && fingerprint_path && iris_path && out, "cfg/fingerprint/iris/out");
        *out = nullptr;
        std::optional<std::string> dump;
        if (dump_dir) dump = dump_dir;
        auto r = biokey::run_pipeline(std::string(fingerprint_path), std::string(iris_path), cfg->cfg, dump);
        *out = new biokey_report{std::move(r)};
    });
}

void biokey_report_destroy(biokey_report* report) { delete report; }

size_t biokey_report_key_bits(const biokey_report* report) { return report ? report->report.key.size() : 0; }

biokey_status biokey_report_key(const biokey_report* report, biokey_key_format format, void* buf, size_t cap,
                                size_t* needed) {
    return guarded([&] {
        require_arg(report, "report");
        const auto& key = report->report.key;
        switch (format) {
            case BIOKEY_FORMAT_BITS: {
                const auto s = key.to_bitstring();
                copy_out(s.data(), s.size(), true, buf, cap, needed);
                break;
            }
            case BIOKEY_FORMAT_HEX: {
                const auto s = key.to_hex();
                copy_out(s.data(), s.size(), true, buf, cap, needed);
                break;
            }
            case BIOKEY_FORMAT_RAW: {
                const auto b = key.to_bytes();
                copy_out(b.data(), b.size(), false, buf, cap, needed);
                break;
            }
            default:
                throw biokey::InvalidParameter("unknown key format");
        }
    });
}

size_t biokey_report_minutiae(const biokey_report* report) { return report ? report->report.minutiae : 0; }

size_t biokey_report_coefficients(const biokey_report* report) { return report ? report->report.coefficients : 0; }

size_t biokey_report_distinct(const biokey_report* report) { return report ? report->report.distinct : 0; }

size_t biokey_report_stage_count(const biokey_report* report) { return report ? report->report.timings.size() : 0; }

biokey_status biokey_report_stage(const biokey_report* report, size_t index, const char** name, double* seconds) {
    return guarded([&] {
        require_arg(report, "report");
        if (index >= report->report.timings.size()) throw biokey::InvalidParameter("stage index out of range");
        const auto& t = report->report.timings[index];
        if (name) *name = t.stage.c_str();
        if (seconds) *seconds = t.seconds;
    });
}

size_t biokey_report_artifact_count(const biokey_report* report) {
    return report ? report->report.artifacts.size() : 0;
}

const char* biokey_report_artifact(const biokey_report* report, size_t index) {
    if (!report || index >= report->report.artifacts.size()) return nullptr;
    return report->report.artifacts[index].c_str();
}

biokey_status biokey_generate_key(const uint32_t* template_values, size_t count, size_t key_bits, char* buf,
                                  size_t cap, size_t* needed) {
    return guarded([&] {
        require_arg(template_values || count == 0, "template_values");
        if (count == 0) throw biokey::InvalidParameter("empty template");
        if (key_bits == 0) throw biokey::InvalidParameter("key_bits must be >= 1");
        const auto key = biokey::keygen::generate_key({template_values, count}, key_bits);
        copy_string(key.to_bitstring(), buf, cap, needed);
    });
}

biokey_status biokey_fixture_create(const char* kind, biokey_fixture** out) {
    return guarded([&] {
        require_arg(kind && out, "kind/out");
        *out = new biokey_fixture{biokey::fixtures::FixtureSpec(kind)};
    });
}

void biokey_fixture_destroy(biokey_fixture* fixture) { delete fixture; }

biokey_status biokey_fixture_set(biokey_fixture* fixture, const char* key, const char* value) {
    return guarded([&] {
        require_arg(fixture && key && value, "fixture/key/value");
        fixture->spec.set(key, value);
    });
}

biokey_status biokey_fixture_write(const biokey_fixture* fixture, const char* path) {
    return guarded([&] {
        require_arg(fixture && path, "fixture/path");
        biokey::write_pgm(path, fixture->spec.render());
    });
}

}  // extern "C"
