#pragma once

#include <chrono>
#include <string>
#include <string_view>

namespace adbdiff::webdriver {

// One remote endpoint plus the capabilities document to open sessions with.
// Capabilities are opaque JSON supplied by the operator (profile path,
// extension, headless flags, ...); the harness never edits them.
struct SessionConfig {
    std::string endpoint;          // e.g. "http://127.0.0.1:9515"
    std::string capabilities = "{}";  // JSON object, becomes alwaysMatch
    std::chrono::milliseconds request_timeout{30000};
};

// A single WebDriver session over the HTTP+JSON wire protocol. The
// constructor issues New Session; the destructor guarantees Delete Session
// even on error paths.
class Client {
public:
    explicit Client(const SessionConfig& config);
    ~Client();
    Client(const Client&) = delete;
    Client& operator=(const Client&) = delete;

    void navigate(const std::string& url);
    std::string current_url();
    std::string page_source();
    std::string screenshot_png();  // decoded PNG bytes

    const std::string& session_id() const { return session_id_; }

private:
    std::string command(const std::string& method, const std::string& path,
                        const std::string& body);

    SessionConfig config_;
    std::string session_id_;
};

std::string base64_decode(std::string_view text);

}  // namespace adbdiff::webdriver
