import { ApiClient } from "./api.js";
import { initApp } from "./main.js";

const app = initApp(window, new ApiClient(""));
void app.refresh();
