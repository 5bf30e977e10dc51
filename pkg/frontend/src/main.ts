import { ApiClient } from "./api";
import { createApp } from "./app";

// api base is configurable per deployment: ?api=http://host:port
const params = new URLSearchParams(window.location.search);
const apiBase = params.get("api") ?? "";

const root = document.getElementById("app");
if (!root) throw new Error("missing #app mount point");

const app = createApp(root, new ApiClient(apiBase), {
  apiBase,
  compareMode: params.get("compare") === "1",
});
void app.init();
