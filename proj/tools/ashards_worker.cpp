// Standalone compute worker: listens for one master connection and evaluates
// tasks on its share slices.
#include <CLI11.hpp>

#include <iostream>

#include "analog_shards.h"

int main(int argc, char** argv) {
    CLI::App app{"analog-shards worker"};
    std::string listen;
    std::uint32_t server_index = 1;
    app.add_option("--listen", listen, "host:port to listen on")->required();
    app.add_option("--server-index", server_index, "this worker's server index")->required();
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }
    as_status st = as_worker_serve(listen.c_str(), server_index);
    if (st != AS_OK) {
        std::cerr << "error: " << as_last_error() << "\n";
        return st == AS_PROTOCOL_FAILURE ? 3 : 2;
    }
    return 0;
}
