// riga-service: HTTP front end for interactive elicitation sessions.

#include <csignal>
#include <cstdlib>
#include <iostream>

#include "CLI11.hpp"
#include "httplib.h"
#include "riga/service.hpp"

namespace {
httplib::Server* g_server = nullptr;
void on_signal(int) {
    if (g_server) g_server->stop();
}
}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Interactive elicitation session service"};
    std::string host = "127.0.0.1";
    int port = 8080;
    std::string data_dir;
    if (const char* v = std::getenv("RIGA_LISTEN_HOST")) host = v;
    if (const char* v = std::getenv("RIGA_LISTEN_PORT")) port = std::atoi(v);
    if (const char* v = std::getenv("RIGA_DATA_DIR")) data_dir = v;
    app.add_option("--host", host, "Listen address (env RIGA_LISTEN_HOST)");
    app.add_option("--port", port, "Listen port (env RIGA_LISTEN_PORT)");
    app.add_option("--data-dir", data_dir, "Session persistence directory (env RIGA_DATA_DIR)");
    CLI11_PARSE(app, argc, argv);

    std::optional<std::filesystem::path> dir;
    if (!data_dir.empty()) dir = data_dir;
    riga::SessionStore store(dir);
    httplib::Server server;
    riga::install_routes(server, store);
    g_server = &server;
    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    std::cerr << "listening on " << host << ':' << port << " (" << store.size() << " sessions restored)\n";
    if (!server.listen(host, port)) {
        std::cerr << "cannot listen on " << host << ':' << port << '\n';
        return 1;
    }
    return 0;
}
