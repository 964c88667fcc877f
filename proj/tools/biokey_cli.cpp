// SPDX-License-Identifier: Apache-2.0
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "biokey/biokey.h"

namespace {

int report_error(biokey_status s) {
    std::cerr << "biokey: " << biokey_last_error() << "\n";
    return static_cast<int>(s);
}

struct ConfigHandle {
    biokey_config* p = nullptr;
    ~ConfigHandle() { biokey_config_destroy(p); }
};

struct ReportHandle {
    biokey_report* p = nullptr;
    ~ReportHandle() { biokey_report_destroy(p); }
};

struct FixtureHandle {
    biokey_fixture* p = nullptr;
    ~FixtureHandle() { biokey_fixture_destroy(p); }
};

struct DeriveArgs {
    std::string fingerprint;
    std::string iris;
    std::string seed;
    std::string key_bits;
    std::string config;
    std::string dump;
    std::string format = "bits";
    std::vector<std::string> overrides;
    bool timings = false;
};

int run_derive(const DeriveArgs& a) {
    ConfigHandle cfg;
    if (auto s = biokey_config_create(&cfg.p); s != BIOKEY_OK) return report_error(s);

    std::string config_path = a.config;
    if (config_path.empty()) {
        if (const char* env = std::getenv("BIOKEY_CONFIG"); env && *env) config_path = env;
    }
    if (!config_path.empty()) {
        if (auto s = biokey_config_load_file(cfg.p, config_path.c_str()); s != BIOKEY_OK) return report_error(s);
    }
    for (const auto& kv : a.overrides) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) {
            std::cerr << "biokey: --set expects key=value, got '" << kv << "'\n";
            return BIOKEY_ERR_PARAM;
        }
        if (auto s = biokey_config_set(cfg.p, kv.substr(0, eq).c_str(), kv.substr(eq + 1).c_str()); s != BIOKEY_OK) {
            return report_error(s);
        }
    }
    if (auto s = biokey_config_set(cfg.p, "seed", a.seed.c_str()); s != BIOKEY_OK) return report_error(s);
    if (!a.key_bits.empty()) {
        if (auto s = biokey_config_set(cfg.p, "key_bits", a.key_bits.c_str()); s != BIOKEY_OK) return report_error(s);
    }

    ReportHandle rep;
    const char* dump = a.dump.empty() ? nullptr : a.dump.c_str();
    if (auto s = biokey_derive(cfg.p, a.fingerprint.c_str(), a.iris.c_str(), dump, &rep.p); s != BIOKEY_OK) {
        return report_error(s);
    }

    const biokey_key_format fmt = a.format == "hex"   ? BIOKEY_FORMAT_HEX
                                  : a.format == "raw" ? BIOKEY_FORMAT_RAW
                                                      : BIOKEY_FORMAT_BITS;
    size_t needed = 0;
    biokey_report_key(rep.p, fmt, nullptr, 0, &needed);
    std::vector<char> buf(needed);
    if (auto s = biokey_report_key(rep.p, fmt, buf.data(), buf.size(), &needed); s != BIOKEY_OK) {
        return report_error(s);
    }
    if (fmt == BIOKEY_FORMAT_RAW) {
        std::fwrite(buf.data(), 1, needed, stdout);
    } else {
        std::fputs(buf.data(), stdout);
        std::fputc('\n', stdout);
    }
    std::fflush(stdout);

    if (a.timings) {
        std::cerr << "minutiae " << biokey_report_minutiae(rep.p) << ", coefficients "
                  << biokey_report_coefficients(rep.p) << ", distinct " << biokey_report_distinct(rep.p) << "\n";
        for (size_t i = 0; i < biokey_report_stage_count(rep.p); ++i) {
            const char* name = nullptr;
            double sec = 0.0;
            biokey_report_stage(rep.p, i, &name, &sec);
            std::fprintf(stderr, "%-24s %9.3f ms\n", name, sec * 1e3);
        }
    }
    return 0;
}

int run_fixture(const std::string& kind, const std::map<std::string, std::string>& params, const std::string& out) {
    FixtureHandle fx;
    if (auto s = biokey_fixture_create(kind.c_str(), &fx.p); s != BIOKEY_OK) return report_error(s);
    for (const auto& [k, v] : params) {
        if (auto s = biokey_fixture_set(fx.p, k.c_str(), v.c_str()); s != BIOKEY_OK) return report_error(s);
    }
    if (auto s = biokey_fixture_write(fx.p, out.c_str()); s != BIOKEY_OK) return report_error(s);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Derive a cryptographic key from a fingerprint and an iris image"};
    app.require_subcommand(1);
    app.set_version_flag("--version", biokey_version());

    DeriveArgs d;
    auto* derive = app.add_subcommand("derive", "Run the pipeline and print the key");
    derive->add_option("--fingerprint", d.fingerprint, "Fingerprint image (PGM or PNG)")->required();
    derive->add_option("--iris", d.iris, "Iris image (PGM or PNG)")->required();
    derive->add_option("--seed", d.seed, "Fusion shuffle seed")->required();
    derive->add_option("--key-bits", d.key_bits, "Key length in bits (default 256)");
    derive->add_option("--config", d.config, "Config file; BIOKEY_CONFIG is used when absent");
    derive->add_option("--set", d.overrides, "Config override key=value (repeatable)");
    derive->add_option("--dump", d.dump, "Write intermediate artifacts to this directory");
    derive->add_option("--format", d.format, "Key output format")->check(CLI::IsMember({"bits", "hex", "raw"}));
    derive->add_flag("--timings", d.timings, "Print counts and stage timings to stderr");

    std::string kind, out;
    std::map<std::string, std::string> geometry;
    auto* fixtures = app.add_subcommand("fixtures", "Write a synthetic input image");
    fixtures->add_option("kind", kind, "fingerprint-stripes or eye-annulus")->required();
    fixtures->add_option("--out", out, "Output PGM path")->required();
    static const char* kGeometry[] = {"width",    "height",   "angle",    "period",       "dislocations",
                                      "seed",     "margin",   "contrast", "cx",           "cy",
                                      "iris-r",   "pupil-r",  "pupil-cx", "pupil-cy",     "texture",
                                      "rotation", "eyelid-top", "eyelid-bottom", "eyelid-level"};
    std::map<std::string, std::string> raw_geometry;
    for (const char* name : kGeometry) {
        fixtures->add_option(std::string("--") + name, raw_geometry[name]);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return BIOKEY_ERR_PARAM;
    }

    if (*derive) return run_derive(d);

    for (const auto& [name, value] : raw_geometry) {
        if (fixtures->count(std::string("--") + name) == 0) continue;
        std::string key = name;
        for (auto& c : key)
            if (c == '-') c = '_';
        geometry[key] = value;
    }
    return run_fixture(kind, geometry, out);
}
