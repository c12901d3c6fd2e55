#pragma once

#include <unistd.h>

#include <atomic>
#include <filesystem>
#include <string>

#include "adbdiff/model_io.hpp"

namespace testing {

inline std::filesystem::path fixtures_dir() {
    return std::filesystem::path(ADBDIFF_FIXTURES_DIR);
}

inline std::string fixture_text(const std::string& name) {
    return adbdiff::read_text_file(fixtures_dir() / name);
}

// Fresh unique directory under the system temp root; caller removes it.
inline std::filesystem::path make_temp_dir(const std::string& tag) {
    static std::atomic<unsigned> counter{0};
    std::filesystem::path dir = std::filesystem::temp_directory_path() /
                                ("adbdiff-test-" + tag + "-" + std::to_string(::getpid()) + "-" +
                                 std::to_string(counter.fetch_add(1)));
    std::filesystem::create_directories(dir);
    return dir;
}

struct TempDir {
    std::filesystem::path path;
    explicit TempDir(const std::string& tag) : path(make_temp_dir(tag)) {}
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
};

}  // namespace testing
